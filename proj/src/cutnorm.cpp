#include "cutnorm.hpp"

#include <algorithm>
#include <cmath>

#include "densities.hpp"
#include "errors.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace gldp {

double cut_norm_refined(const std::vector<double>& w, const Matrix& m) {
    std::size_t n = w.size();
    if (n > 24) throw guard_error("cut_norm_refined: more than 24 parts");
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = w[i] * w[j] * m(i, j);

    std::vector<double> col(n, 0.0);
    std::uint32_t xbits = 0;
    double best = 0.0;
    std::uint64_t total = 1ull << n;
    for (std::uint64_t g = 1; g < total; ++g) {
        int i = __builtin_ctzll(g);
        double sgn = (xbits >> i) & 1u ? -1.0 : 1.0;
        xbits ^= 1u << i;
        const double* row = a.data() + static_cast<std::size_t>(i) * n;
        double pos = 0.0, neg = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double c = col[j] + sgn * row[j];
            col[j] = c;
            if (c > 0.0)
                pos += c;
            else
                neg -= c;
        }
        best = std::max(best, std::max(pos, neg));
    }
    return best;
}

double cut_norm_diff(const StepGraphon& u, const StepGraphon& v) {
    Refinement r = common_refinement(u, v);
    std::size_t m = r.measures.size();
    if (m > 24)
        throw guard_error("cut_norm_diff: common refinement exceeds 24 parts; "
                          "use cut_norm_diff_approx");
    Matrix d(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            d(i, j) = u.value(r.left_part[i], r.left_part[j]) -
                      v.value(r.right_part[i], r.right_part[j]);
    return cut_norm_refined(r.measures, d);
}

namespace {

double ascend_from(const std::vector<double>& a, std::size_t n, std::vector<int>& x) {
    // Alternate exact responses: given x, the best y takes positive columns;
    // given y, the best x takes positive rows.  When alternation stalls, try
    // single flips of x (each scored by its exact column response) to escape
    // shallow local maxima.  Run both objective signs.
    double best = 0.0;
    for (double sgn : {1.0, -1.0}) {
        std::vector<int> xs = x;
        auto response_value = [&](const std::vector<int>& xv) {
            double val = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double c = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (xv[i]) c += a[i * n + j];
                if (sgn * c > 0.0) val += sgn * c;
            }
            return val;
        };
        double val = response_value(xs);
        for (int round = 0; round < 200; ++round) {
            // Exact x response to the current y response.
            std::vector<int> y(n);
            for (std::size_t j = 0; j < n; ++j) {
                double c = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (xs[i]) c += a[i * n + j];
                y[j] = sgn * c > 0.0 ? 1 : 0;
            }
            std::vector<int> x2(n);
            for (std::size_t i = 0; i < n; ++i) {
                double c = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (y[j]) c += a[i * n + j];
                x2[i] = sgn * c > 0.0 ? 1 : 0;
            }
            double v2 = response_value(x2);
            if (v2 > val + 1e-15) {
                xs = std::move(x2);
                val = v2;
                continue;
            }
            // Single-flip escape.
            bool improved = false;
            for (std::size_t i = 0; i < n && !improved; ++i) {
                xs[i] ^= 1;
                double vf = response_value(xs);
                if (vf > val + 1e-15) {
                    val = vf;
                    improved = true;
                } else {
                    xs[i] ^= 1;
                }
            }
            if (!improved) break;
        }
        best = std::max(best, val);
    }
    return best;
}

} // namespace

double cut_norm_diff_approx(const StepGraphon& u, const StepGraphon& v, int restarts,
                            std::uint64_t seed) {
    if (restarts < 1) throw config_error("cut_norm_diff_approx: restarts >= 1 required");
    Refinement r = common_refinement(u, v);
    std::size_t n = r.measures.size();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = r.measures[i] * r.measures[j] *
                           (u.value(r.left_part[i], r.left_part[j]) -
                            v.value(r.right_part[i], r.right_part[j]));

    double best = 0.0;
    std::vector<int> x(n, 1);
    best = std::max(best, ascend_from(a, n, x));
    for (int t = 1; t < restarts; ++t) {
        StreamRng rng(stream_key(seed, 'x', static_cast<std::uint64_t>(t)));
        for (std::size_t i = 0; i < n; ++i) x[i] = rng.next_u64() & 1u ? 1 : 0;
        best = std::max(best, ascend_from(a, n, x));
    }
    return best;
}

namespace {

void require_equal_parts(const StepGraphon& u, const StepGraphon& v, const char* who) {
    std::size_t m = u.parts();
    if (v.parts() != m) throw config_error(std::string(who) + ": equal part counts required");
    if (m > 8) throw guard_error(std::string(who) + ": at most 8 parts supported");
    double tol = policy().abs_tol;
    for (std::size_t i = 0; i < m; ++i)
        if (std::fabs(u.measure(i) - 1.0 / m) > tol || std::fabs(v.measure(i) - 1.0 / m) > tol)
            throw config_error(std::string(who) + ": equal-measure parts required");
}

} // namespace

double cut_dist_labeled(const StepGraphon& u, const StepGraphon& v) {
    require_equal_parts(u, v, "cut_dist_labeled");
    std::size_t m = u.parts();
    Matrix d(m);
    double best = kInf;
    for (const auto& perm : all_permutations(static_cast<int>(m))) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                d(i, j) = u.value(i, j) - v.value(perm[i], perm[j]);
        best = std::min(best, cut_norm_refined(u.measures(), d));
        if (best <= 1e-15) break;
    }
    return best;
}

double evaluate_plan_cut_norm(const StepGraphon& u, const StepGraphon& v,
                              const TransportPlan& plan) {
    if (plan.rows() != u.parts() || plan.cols() != v.parts())
        throw config_error("evaluate_plan_cut_norm: plan shape mismatch");
    {
        TransportPlan check = plan;
        check.row_marginals = u.measures();
        check.col_marginals = v.measures();
        check.validate();
    }
    std::vector<std::pair<int, int>> cells;
    std::vector<double> w;
    for (std::size_t i = 0; i < plan.rows(); ++i)
        for (std::size_t j = 0; j < plan.cols(); ++j)
            if (plan.c[i][j] > 1e-15) {
                cells.emplace_back(static_cast<int>(i), static_cast<int>(j));
                w.push_back(plan.c[i][j]);
            }
    if (cells.size() > 24)
        throw guard_error("evaluate_plan_cut_norm: plan support exceeds 24 cells");
    Matrix d(cells.size());
    for (std::size_t a = 0; a < cells.size(); ++a)
        for (std::size_t b = 0; b < cells.size(); ++b)
            d(a, b) = u.value(cells[a].first, cells[b].first) -
                      v.value(cells[a].second, cells[b].second);
    return cut_norm_refined(w, d);
}

UpperResult cut_dist_upper(const StepGraphon& u, const StepGraphon& v,
                           const std::optional<TransportPlan>& init, int iters, int restarts,
                           std::uint64_t seed) {
    const auto& rows = u.measures();
    const auto& cols = v.measures();
    if (rows.size() + cols.size() > 25)
        throw guard_error("cut_dist_upper: combined part count exceeds the refinement guard");

    std::vector<TransportPlan> starts;
    if (init) {
        TransportPlan p = *init;
        p.row_marginals = rows;
        p.col_marginals = cols;
        p.validate(); // marginal mismatch is an error per contract
        starts.push_back(std::move(p));
    }
    starts.push_back(nw_corner(rows, cols));
    if (rows.size() == cols.size()) starts.push_back(greedy_diagonal(rows, cols));
    for (int t = 0; t < restarts; ++t) {
        StreamRng rng(stream_key(seed, 'p', static_cast<std::uint64_t>(t)));
        starts.push_back(random_vertex(rows, cols, rng));
    }

    UpperResult best;
    best.value = kInf;
    auto moves = cycle_moves(rows.size(), cols.size());
    for (std::size_t s = 0; s < starts.size(); ++s) {
        auto& plan = starts[s];
        double val;
        try {
            val = evaluate_plan_cut_norm(u, v, plan);
        } catch (const guard_error&) {
            if (init && s == 0) throw; // a caller-supplied plan must be usable
            continue;
        }
        for (int it = 0; it < iters; ++it) {
            bool improved = false;
            for (const auto& mv : moves) {
                double t = std::min(plan.c[mv.i][mv.j2], plan.c[mv.i2][mv.j]);
                if (t <= 1e-15) continue;
                TransportPlan cand = plan;
                cand.c[mv.i][mv.j] += t;
                cand.c[mv.i2][mv.j2] += t;
                cand.c[mv.i][mv.j2] -= t;
                cand.c[mv.i2][mv.j] -= t;
                if (cand.support_size() > 24) continue;
                double cv = evaluate_plan_cut_norm(u, v, cand);
                if (cv < val - 1e-12) {
                    plan = std::move(cand);
                    val = cv;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        if (val < best.value) {
            best.value = val;
            best.plan = plan;
        }
    }
    return best;
}

LowerResult cut_dist_lower(const StepGraphon& u, const StepGraphon& v, int max_size) {
    if (max_size > 5) throw guard_error("cut_dist_lower: max_size <= 5 required");
    LowerResult out;
    for (int nv = 2; nv <= max_size; ++nv) {
        for (std::uint32_t rep : iso_class_reps(nv)) {
            SimpleGraph f = SimpleGraph::from_edge_mask(nv, rep);
            int e = f.edge_count();
            if (e == 0) continue;
            bool isolated = false;
            for (int i = 0; i < nv && !isolated; ++i) {
                bool any = false;
                for (int j = 0; j < nv && !any; ++j) any = f.edge(i, j);
                isolated = !any;
            }
            if (isolated) continue; // same ratio as its smaller core
            double gap = std::fabs(hom_density(f, u) - hom_density(f, v)) / e;
            if (gap > out.value) {
                out.value = gap;
                out.witness = f;
            }
        }
    }
    return out;
}

} // namespace gldp
