#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rng.hpp"
#include "util.hpp"

namespace gldp {

// Nonnegative matrix with prescribed row and column sums; the coupling object
// shared by the metric upper bounds and the J optimizer.
struct TransportPlan {
    std::vector<double> row_marginals;
    std::vector<double> col_marginals;
    std::vector<std::vector<double>> c; // rows x cols

    std::size_t rows() const { return row_marginals.size(); }
    std::size_t cols() const { return col_marginals.size(); }

    void validate() const; // throws config_error on marginal mismatch
    std::size_t support_size(double eps = 1e-15) const;
};

// Northwest-corner vertex for the given marginals.
TransportPlan nw_corner(const std::vector<double>& rows, const std::vector<double>& cols);

// Random polytope vertex: northwest corner under seeded row/column orders.
TransportPlan random_vertex(const std::vector<double>& rows, const std::vector<double>& cols,
                            StreamRng& rng);

// Maximal-diagonal coupling (requires rows.size() == cols.size()); surplus is
// matched in index order.
TransportPlan greedy_diagonal(const std::vector<double>& rows, const std::vector<double>& cols);

// Independence coupling rows (x) cols.
TransportPlan product_plan(const std::vector<double>& rows, const std::vector<double>& cols);

// All 4-cycle pivot directions (i,j,i',j') in lexicographic order; moving mass
// t along a cycle adds t at (i,j),(i',j') and removes t at (i,j'),(i',j).
struct CycleMove {
    std::size_t i, j, i2, j2;
};
std::vector<CycleMove> cycle_moves(std::size_t rows, std::size_t cols);

} // namespace gldp
