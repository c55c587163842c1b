#include "transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "policy.hpp"

namespace gldp {

void TransportPlan::validate() const {
    double tol = policy().marginal_tol;
    if (c.size() != rows()) throw config_error("TransportPlan: row count mismatch");
    for (std::size_t i = 0; i < rows(); ++i)
        if (c[i].size() != cols()) throw config_error("TransportPlan: column count mismatch");
    for (std::size_t i = 0; i < rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols(); ++j) {
            if (c[i][j] < -1e-15) throw config_error("TransportPlan: entries must be nonnegative");
            s += c[i][j];
        }
        if (std::fabs(s - row_marginals[i]) > tol)
            throw config_error("TransportPlan: row sums must equal the row marginals");
    }
    for (std::size_t j = 0; j < cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows(); ++i) s += c[i][j];
        if (std::fabs(s - col_marginals[j]) > tol)
            throw config_error("TransportPlan: column sums must equal the column marginals");
    }
}

std::size_t TransportPlan::support_size(double eps) const {
    std::size_t n = 0;
    for (const auto& row : c)
        for (double x : row)
            if (x > eps) ++n;
    return n;
}

namespace {

TransportPlan nw_corner_ordered(const std::vector<double>& rows, const std::vector<double>& cols,
                                const std::vector<std::size_t>& ro,
                                const std::vector<std::size_t>& co) {
    TransportPlan p;
    p.row_marginals = rows;
    p.col_marginals = cols;
    p.c.assign(rows.size(), std::vector<double>(cols.size(), 0.0));
    std::vector<double> r = rows, q = cols;
    std::size_t a = 0, b = 0;
    while (a < ro.size() && b < co.size()) {
        std::size_t i = ro[a], j = co[b];
        double d = std::min(r[i], q[j]);
        p.c[i][j] += d;
        r[i] -= d;
        q[j] -= d;
        if (r[i] <= 1e-15 && a < ro.size())
            ++a;
        else if (q[j] <= 1e-15)
            ++b;
    }
    return p;
}

} // namespace

TransportPlan nw_corner(const std::vector<double>& rows, const std::vector<double>& cols) {
    std::vector<std::size_t> ro(rows.size()), co(cols.size());
    std::iota(ro.begin(), ro.end(), 0);
    std::iota(co.begin(), co.end(), 0);
    return nw_corner_ordered(rows, cols, ro, co);
}

TransportPlan random_vertex(const std::vector<double>& rows, const std::vector<double>& cols,
                            StreamRng& rng) {
    std::vector<std::size_t> ro(rows.size()), co(cols.size());
    std::iota(ro.begin(), ro.end(), 0);
    std::iota(co.begin(), co.end(), 0);
    for (std::size_t i = ro.size(); i > 1; --i) std::swap(ro[i - 1], ro[rng.next_below(i)]);
    for (std::size_t j = co.size(); j > 1; --j) std::swap(co[j - 1], co[rng.next_below(j)]);
    return nw_corner_ordered(rows, cols, ro, co);
}

TransportPlan greedy_diagonal(const std::vector<double>& rows, const std::vector<double>& cols) {
    if (rows.size() != cols.size()) throw config_error("greedy_diagonal: square marginals required");
    TransportPlan p;
    p.row_marginals = rows;
    p.col_marginals = cols;
    p.c.assign(rows.size(), std::vector<double>(cols.size(), 0.0));
    std::vector<double> r = rows, q = cols;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double d = std::min(r[i], q[i]);
        p.c[i][i] = d;
        r[i] -= d;
        q[i] -= d;
    }
    std::size_t j = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        while (r[i] > 1e-15 && j < cols.size()) {
            double d = std::min(r[i], q[j]);
            if (d > 0.0) {
                p.c[i][j] += d;
                r[i] -= d;
                q[j] -= d;
            }
            if (q[j] <= 1e-15)
                ++j;
            else
                break;
        }
    }
    return p;
}

TransportPlan product_plan(const std::vector<double>& rows, const std::vector<double>& cols) {
    TransportPlan p;
    p.row_marginals = rows;
    p.col_marginals = cols;
    p.c.assign(rows.size(), std::vector<double>(cols.size(), 0.0));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) p.c[i][j] = rows[i] * cols[j];
    return p;
}

std::vector<CycleMove> cycle_moves(std::size_t rows, std::size_t cols) {
    std::vector<CycleMove> out;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t i2 = 0; i2 < rows; ++i2)
                for (std::size_t j2 = 0; j2 < cols; ++j2)
                    if (i2 != i && j2 != j) out.push_back({i, j, i2, j2});
    return out;
}

} // namespace gldp
