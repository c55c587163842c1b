#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "step_graphon.hpp"
#include "transport.hpp"

namespace gldp {

// Certified bracket for a cut distance; lower comes from density gaps, upper
// from an explicit coupling or permutation.
struct DistanceBounds {
    double lower = 0.0;
    double upper = 1.0;
    std::string witness_upper;
    std::string witness_lower;
};

// Exact cut norm of the difference kernel on an aligned part system: max over
// subset pairs of |sum_{i in S, j in T} w_i w_j M_ij|.  Runs both signs of the
// objective; for each sign and each S the optimal T is the positive-column
// response, and the bilinear form attains its maximum at vertex pairs of the
// cube, so subset enumeration is exact.
double cut_norm_refined(const std::vector<double>& w, const Matrix& m);

// Exact d_box(U, V) after common refinement; refuses refinements beyond 24
// parts (use cut_norm_diff_approx instead).
double cut_norm_diff(const StepGraphon& u, const StepGraphon& v);

// Greedy coordinate ascent with exact column responses and seeded restarts.
// Returns the value of an explicit subset pair, hence a certified lower bound
// on the exact cut norm; never decreases as restarts grow.
double cut_norm_diff_approx(const StepGraphon& u, const StepGraphon& v, int restarts,
                            std::uint64_t seed);

// Min over all part permutations of the exact cut norm; both inputs must have
// m <= 8 equal-measure parts.  Upper bound on the cut distance, exact for the
// labeled-ball convention used by the harness.
double cut_dist_labeled(const StepGraphon& u, const StepGraphon& v);

// d_box of the rearranged pair induced by a transport plan between the two
// part systems: cells (i, j) with mass c[i][j] carry values u_ii' and v_jj'.
double evaluate_plan_cut_norm(const StepGraphon& u, const StepGraphon& v,
                              const TransportPlan& plan);

struct UpperResult {
    double value = 1.0;
    TransportPlan plan;
};

// Best coupling upper bound found by vertex-pivot local search from seeded
// restarts (and from init when given).  Never below the true cut distance.
UpperResult cut_dist_upper(const StepGraphon& u, const StepGraphon& v,
                           const std::optional<TransportPlan>& init, int iters, int restarts,
                           std::uint64_t seed);

struct LowerResult {
    double value = 0.0;
    SimpleGraph witness;
};

// Counting-Lemma lower bound: max over graphs F with at most max_size vertices
// and at least one edge of |t(F,U) - t(F,V)| / e(F).
LowerResult cut_dist_lower(const StepGraphon& u, const StepGraphon& v, int max_size);

} // namespace gldp
