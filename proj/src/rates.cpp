#include "rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "densities.hpp"
#include "errors.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace gldp {

double rel_entropy(double r, double p) {
    if (!(r >= 0.0 && r <= 1.0) || !(p >= 0.0 && p <= 1.0))
        throw config_error("rel_entropy: arguments must lie in [0,1]");
    if (p == 0.0) return r == 0.0 ? 0.0 : kInf;
    if (p == 1.0) return r == 1.0 ? 0.0 : kInf;
    double t1 = r == 0.0 ? 0.0 : r * std::log(r / p);
    double t2 = r == 1.0 ? 0.0 : (1.0 - r) * std::log((1.0 - r) / (1.0 - p));
    return std::max(0.0, t1 + t2);
}

double I_p(const StepGraphon& u, double p) {
    if (p < 0.0 || p > 1.0) throw config_error("I_p: p must lie in [0,1]");
    Kahan s;
    for (std::size_t i = 0; i < u.parts(); ++i)
        for (std::size_t j = 0; j < u.parts(); ++j) {
            double w = u.measure(i) * u.measure(j);
            if (w == 0.0) continue;
            double h = rel_entropy(u.value(i, j), p);
            if (std::isinf(h)) return kInf;
            s.add(w * h);
        }
    return 0.5 * s.value();
}

namespace {

void check_p_matrix(const Matrix& p, int k, const char* who) {
    if (static_cast<int>(p.size()) != k) throw config_error(std::string(who) + ": p must be k x k");
    if (!p.symmetric(policy().sym_tol))
        throw config_error(std::string(who) + ": p must be symmetric");
    for (double v : p.data())
        if (!(v >= 0.0 && v <= 1.0))
            throw config_error(std::string(who) + ": p entries must lie in [0,1]");
}

} // namespace

double I_k_p(const ColoredStepGraphon& x, const Matrix& p) {
    check_p_matrix(p, x.k(), "I_k_p");
    const StepGraphon& u = x.graphon();
    Kahan s;
    for (std::size_t c = 0; c < u.parts(); ++c)
        for (std::size_t d = 0; d < u.parts(); ++d) {
            double w = u.measure(c) * u.measure(d);
            if (w == 0.0) continue;
            double h = rel_entropy(u.value(c, d), p(x.color(c), x.color(d)));
            if (std::isinf(h)) return kInf;
            s.add(w * h);
        }
    return 0.5 * s.value();
}

StepGraphon gamma_forget(const ColoredStepGraphon& x) { return x.graphon(); }

StepGraphon gamma_patch(const ColoredStepGraphon& x, int i, int j, const Matrix& p) {
    check_p_matrix(p, x.k(), "gamma_patch");
    if (i < 0 || i >= x.k() || j < 0 || j >= x.k())
        throw config_error("gamma_patch: color index out of range");
    const StepGraphon& u = x.graphon();
    std::size_t m = u.parts();
    Matrix vals(m);
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = 0; d < m; ++d) {
            int ci = x.color(c), cj = x.color(d);
            bool kept = (ci == i && cj == j) || (ci == j && cj == i);
            vals(c, d) = kept ? u.value(c, d) : p(i, j);
        }
    std::vector<double> ms = u.measures();
    return StepGraphon(std::move(ms), std::move(vals));
}

// ---------------------------------------------------------------------------
// The J optimizer.

namespace {

constexpr double kSupportEps = 1e-15;

struct JProblem {
    std::size_t k = 0, m = 0;
    std::vector<double> rows; // alpha / |alpha|_1
    std::vector<double> cols; // part measures of U
    std::vector<double> h;    // h[(a*k+b)*m*m + c*m + d]

    double hv(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
        return h[(a * k + b) * m * m + c * m + d];
    }
};

JProblem make_problem(const StepGraphon& u, const std::vector<double>& alpha, const Matrix& p) {
    JProblem pr;
    pr.k = p.size();
    pr.m = u.parts();
    double norm = 0.0;
    for (double a : alpha) {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw config_error("j_alpha_p: alpha entries must be nonnegative and finite");
        norm += a;
    }
    if (alpha.size() != pr.k) throw config_error("j_alpha_p: alpha length must match p");
    if (norm <= 0.0) throw config_error("j_alpha_p: alpha must be non-zero");
    pr.rows.resize(pr.k);
    for (std::size_t a = 0; a < pr.k; ++a) pr.rows[a] = alpha[a] / norm;
    pr.cols = u.measures();
    pr.h.resize(pr.k * pr.k * pr.m * pr.m);
    for (std::size_t a = 0; a < pr.k; ++a)
        for (std::size_t b = 0; b < pr.k; ++b)
            for (std::size_t c = 0; c < pr.m; ++c)
                for (std::size_t d = 0; d < pr.m; ++d)
                    pr.h[(a * pr.k + b) * pr.m * pr.m + c * pr.m + d] =
                        rel_entropy(u.value(c, d), p(a, b));
    return pr;
}

using PlanMat = std::vector<std::vector<double>>;

// (1/2) sum C_ac C_bd h; +inf when the support touches an infinite cell pair.
double plan_value(const JProblem& pr, const PlanMat& c) {
    Kahan s;
    for (std::size_t a = 0; a < pr.k; ++a)
        for (std::size_t cc = 0; cc < pr.m; ++cc) {
            double x = c[a][cc];
            if (x <= kSupportEps) continue;
            for (std::size_t b = 0; b < pr.k; ++b)
                for (std::size_t d = 0; d < pr.m; ++d) {
                    double y = c[b][d];
                    if (y <= kSupportEps) continue;
                    double hh = pr.hv(a, b, cc, d);
                    if (std::isinf(hh)) return kInf;
                    s.add(x * y * hh);
                }
        }
    return 0.5 * s.value();
}

// Bilinear form over the finite entries only; valid on feasible plans, where
// infinite terms carry zero mass.
double q_fin(const JProblem& pr, const PlanMat& x, const PlanMat& y) {
    Kahan s;
    for (std::size_t a = 0; a < pr.k; ++a)
        for (std::size_t c = 0; c < pr.m; ++c) {
            if (x[a][c] == 0.0) continue;
            for (std::size_t b = 0; b < pr.k; ++b)
                for (std::size_t d = 0; d < pr.m; ++d) {
                    if (y[b][d] == 0.0) continue;
                    double hh = pr.hv(a, b, c, d);
                    if (!std::isinf(hh)) s.add(x[a][c] * y[b][d] * hh);
                }
        }
    return s.value();
}

// Exact transportation LP by successive shortest paths; forbidden arcs carry
// infinite cost.  Returns false when no full flow avoids them.
bool transport_lp(const std::vector<double>& rows, const std::vector<double>& cols,
                  const std::vector<std::vector<double>>& cost, PlanMat& out) {
    std::size_t k = rows.size(), m = cols.size();
    out.assign(k, std::vector<double>(m, 0.0));
    std::vector<double> rleft = rows, cleft = cols;
    double remaining = 0.0;
    for (double r : rows) remaining += r;

    // Node ids: 0 source, 1..k rows, k+1..k+m cols, k+m+1 sink.
    std::size_t n = k + m + 2, sink = k + m + 1;
    int augmentations = 0;
    while (remaining > 1e-12) {
        if (++augmentations > 500) throw internal_error("transport_lp: did not converge");
        // Bellman-Ford over the residual network.
        std::vector<double> dist(n, kInf);
        std::vector<int> pre_node(n, -1);
        dist[0] = 0.0;
        for (std::size_t round = 0; round < n; ++round) {
            bool changed = false;
            for (std::size_t a = 0; a < k; ++a)
                if (rleft[a] > 1e-15 && dist[0] < dist[1 + a]) {
                    dist[1 + a] = dist[0];
                    pre_node[1 + a] = 0;
                    changed = true;
                }
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t c = 0; c < m; ++c) {
                    if (std::isinf(cost[a][c])) continue;
                    // forward arc
                    if (!std::isinf(dist[1 + a]) && dist[1 + a] + cost[a][c] < dist[1 + k + c] - 1e-15) {
                        dist[1 + k + c] = dist[1 + a] + cost[a][c];
                        pre_node[1 + k + c] = static_cast<int>(1 + a);
                        changed = true;
                    }
                    // residual arc
                    if (out[a][c] > 1e-15 && !std::isinf(dist[1 + k + c]) &&
                        dist[1 + k + c] - cost[a][c] < dist[1 + a] - 1e-15) {
                        dist[1 + a] = dist[1 + k + c] - cost[a][c];
                        pre_node[1 + a] = static_cast<int>(1 + k + c);
                        changed = true;
                    }
                }
            for (std::size_t c = 0; c < m; ++c)
                if (cleft[c] > 1e-15 && !std::isinf(dist[1 + k + c]) && dist[1 + k + c] < dist[sink]) {
                    dist[sink] = dist[1 + k + c];
                    pre_node[sink] = static_cast<int>(1 + k + c);
                    changed = true;
                }
            if (!changed) break;
        }
        if (std::isinf(dist[sink])) return false;

        // Trace the path and find the bottleneck.
        std::vector<int> path;
        for (int v = static_cast<int>(sink); v != -1; v = pre_node[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        double push = remaining;
        for (std::size_t t = 0; t + 1 < path.size(); ++t) {
            int x = path[t], y = path[t + 1];
            if (x == 0)
                push = std::min(push, rleft[y - 1]);
            else if (y == static_cast<int>(sink))
                push = std::min(push, cleft[x - 1 - k]);
            else if (x >= 1 && x <= static_cast<int>(k)) {
                // forward row->col: capacity unbounded
            } else {
                // residual col->row
                push = std::min(push, out[y - 1][x - 1 - k]);
            }
        }
        if (push <= 1e-15) return false;
        for (std::size_t t = 0; t + 1 < path.size(); ++t) {
            int x = path[t], y = path[t + 1];
            if (x == 0)
                rleft[y - 1] -= push;
            else if (y == static_cast<int>(sink))
                cleft[x - 1 - k] -= push;
            else if (x >= 1 && x <= static_cast<int>(k))
                out[x - 1][y - 1 - k] += push;
            else
                out[y - 1][x - 1 - k] -= push;
        }
        remaining -= push;
    }
    return true;
}

PlanMat to_mat(const TransportPlan& p) { return p.c; }

TransportPlan to_plan(const JProblem& pr, PlanMat c) {
    TransportPlan p;
    p.row_marginals = pr.rows;
    p.col_marginals = pr.cols;
    p.c = std::move(c);
    return p;
}

// One local-search pass: alternating transportation solves plus 4-cycle moves
// with exact quadratic line search; objective never increases.
void improve(const JProblem& pr, PlanMat& c, double& val, int iters) {
    auto moves = cycle_moves(pr.k, pr.m);
    for (int it = 0; it < iters; ++it) {
        bool improved = false;

        // Fix one plan factor; the other solves a linear transportation problem.
        std::vector<std::vector<double>> cost(pr.k, std::vector<double>(pr.m, 0.0));
        for (std::size_t b = 0; b < pr.k; ++b)
            for (std::size_t d = 0; d < pr.m; ++d) {
                Kahan s;
                bool inf = false;
                for (std::size_t a = 0; a < pr.k && !inf; ++a)
                    for (std::size_t cc = 0; cc < pr.m; ++cc) {
                        if (c[a][cc] <= kSupportEps) continue;
                        double hh = pr.hv(a, b, cc, d);
                        if (std::isinf(hh)) {
                            inf = true;
                            break;
                        }
                        s.add(c[a][cc] * hh);
                    }
                cost[b][d] = inf ? kInf : s.value();
            }
        PlanMat lp;
        if (transport_lp(pr.rows, pr.cols, cost, lp)) {
            double lv = plan_value(pr, lp);
            if (lv < val - 1e-15) {
                c = std::move(lp);
                val = lv;
                improved = true;
            }
        }

        // 4-cycle pivots with the exact quadratic restriction along the move.
        for (const auto& mv : moves) {
            double tmax = std::min(c[mv.i][mv.j2], c[mv.i2][mv.j]);
            if (tmax <= kSupportEps) continue;
            PlanMat delta(pr.k, std::vector<double>(pr.m, 0.0));
            delta[mv.i][mv.j] = 1.0;
            delta[mv.i2][mv.j2] = 1.0;
            delta[mv.i][mv.j2] = -1.0;
            delta[mv.i2][mv.j] = -1.0;
            double qcd = q_fin(pr, c, delta);
            double qdd = q_fin(pr, delta, delta);
            std::vector<double> cand{tmax};
            if (qdd > 0.0) {
                double ts = -qcd / qdd;
                if (ts > kSupportEps && ts < tmax) cand.push_back(ts);
            }
            double bestv = val;
            double bestt = -1.0;
            for (double t : cand) {
                PlanMat c2 = c;
                c2[mv.i][mv.j] += t;
                c2[mv.i2][mv.j2] += t;
                c2[mv.i][mv.j2] = std::max(0.0, c2[mv.i][mv.j2] - t);
                c2[mv.i2][mv.j] = std::max(0.0, c2[mv.i2][mv.j] - t);
                double v2 = plan_value(pr, c2);
                if (v2 < bestv - 1e-12) {
                    bestv = v2;
                    bestt = t;
                }
            }
            if (bestt > 0.0) {
                c[mv.i][mv.j] += bestt;
                c[mv.i2][mv.j2] += bestt;
                c[mv.i][mv.j2] = std::max(0.0, c[mv.i][mv.j2] - bestt);
                c[mv.i2][mv.j] = std::max(0.0, c[mv.i2][mv.j] - bestt);
                val = plan_value(pr, c);
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
}

RateResult solve_heuristic(const JProblem& pr, const SolveOptions& opts) {
    std::vector<PlanMat> starts;
    starts.push_back(to_mat(product_plan(pr.rows, pr.cols)));
    starts.push_back(to_mat(nw_corner(pr.rows, pr.cols)));
    if (pr.k == pr.m) starts.push_back(to_mat(greedy_diagonal(pr.rows, pr.cols)));
    {
        // Support-avoiding start: route mass away from entries that touch
        // infinite cells.
        std::vector<std::vector<double>> cost(pr.k, std::vector<double>(pr.m, 0.0));
        bool any_inf = false;
        for (std::size_t a = 0; a < pr.k; ++a)
            for (std::size_t c = 0; c < pr.m; ++c) {
                double n = 0.0;
                for (std::size_t b = 0; b < pr.k; ++b)
                    for (std::size_t d = 0; d < pr.m; ++d)
                        if (std::isinf(pr.hv(a, b, c, d))) n += 1.0;
                cost[a][c] = n;
                if (n > 0.0) any_inf = true;
            }
        if (any_inf) {
            PlanMat lp;
            if (transport_lp(pr.rows, pr.cols, cost, lp)) starts.push_back(std::move(lp));
        }
    }
    for (int t = 0; t < opts.restarts; ++t) {
        StreamRng rng(stream_key(opts.seed, 'j', static_cast<std::uint64_t>(t)));
        starts.push_back(to_mat(random_vertex(pr.rows, pr.cols, rng)));
    }

    double best = kInf;
    PlanMat best_c;
    for (auto& c : starts) {
        double val = plan_value(pr, c);
        improve(pr, c, val, opts.iters);
        if (val < best) {
            best = val;
            best_c = c;
        }
    }

    RateResult res;
    res.method = "heuristic";
    res.gap = kInf;
    if (std::isinf(best)) {
        res.value = kInf;
        res.feasible = false;
        res.plan = to_plan(pr, PlanMat(pr.k, std::vector<double>(pr.m, 0.0)));
    } else {
        res.value = best;
        res.plan = to_plan(pr, std::move(best_c));
    }
    return res;
}

// --- exact mode: the transportation polytope has dimension (k-1)(m-1) <= 2 ---

using Vec2 = std::array<double, 2>;

struct Quadratic2 {
    // f(s) = c0 + g.s + (1/2) s^T H s
    double c0 = 0.0;
    Vec2 g{0.0, 0.0};
    double h00 = 0.0, h01 = 0.0, h11 = 0.0;

    double eval(const Vec2& s) const {
        return c0 + g[0] * s[0] + g[1] * s[1] +
               0.5 * (h00 * s[0] * s[0] + 2.0 * h01 * s[0] * s[1] + h11 * s[1] * s[1]);
    }
};

struct LinIneq {
    // b + a.s >= 0
    double b = 0.0;
    Vec2 a{0.0, 0.0};
};

// Minimize a quadratic over {s : constraints}, dim <= 2; returns candidates.
void minimize_dim1(const Quadratic2& f, const Vec2& p, const Vec2& d,
                   const std::vector<LinIneq>& ineqs, std::vector<Vec2>& cand) {
    double lo = -kInf, hi = kInf;
    for (const auto& in : ineqs) {
        double base = in.b + in.a[0] * p[0] + in.a[1] * p[1];
        double slope = in.a[0] * d[0] + in.a[1] * d[1];
        if (std::fabs(slope) < 1e-14) {
            if (base < -1e-10) return; // line misses the feasible set
        } else if (slope > 0.0) {
            lo = std::max(lo, -base / slope);
        } else {
            hi = std::min(hi, -base / slope);
        }
    }
    if (lo > hi + 1e-12 || std::isinf(lo) || std::isinf(hi)) return;
    auto at = [&](double t) { return Vec2{p[0] + t * d[0], p[1] + t * d[1]}; };
    cand.push_back(at(lo));
    cand.push_back(at(hi));
    // Stationary point of the restriction, kept when the restriction is convex.
    double a2 = 0.5 * (f.h00 * d[0] * d[0] + 2.0 * f.h01 * d[0] * d[1] + f.h11 * d[1] * d[1]);
    double a1 = f.g[0] * d[0] + f.g[1] * d[1] + f.h00 * p[0] * d[0] +
                f.h01 * (p[0] * d[1] + p[1] * d[0]) + f.h11 * p[1] * d[1];
    if (a2 > 1e-14) {
        double t = -a1 / (2.0 * a2);
        if (t > lo && t < hi) cand.push_back(at(t));
    }
}

std::vector<Vec2> minimize_dim2(const Quadratic2& f, const std::vector<LinIneq>& ineqs) {
    std::vector<Vec2> cand;
    // Interior stationary point.
    double det = f.h00 * f.h11 - f.h01 * f.h01;
    if (std::fabs(det) > 1e-14) {
        Vec2 s{(-f.g[0] * f.h11 + f.g[1] * f.h01) / det, (-f.g[1] * f.h00 + f.g[0] * f.h01) / det};
        bool ok = true;
        for (const auto& in : ineqs)
            if (in.b + in.a[0] * s[0] + in.a[1] * s[1] < -1e-10) ok = false;
        if (ok) cand.push_back(s);
    }
    // Every active edge.
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
        const auto& in = ineqs[i];
        double norm = in.a[0] * in.a[0] + in.a[1] * in.a[1];
        if (norm < 1e-20) continue;
        Vec2 p{-in.b * in.a[0] / norm, -in.b * in.a[1] / norm};
        Vec2 d{-in.a[1], in.a[0]};
        std::vector<LinIneq> others;
        for (std::size_t j = 0; j < ineqs.size(); ++j)
            if (j != i) others.push_back(ineqs[j]);
        minimize_dim1(f, p, d, others, cand);
    }
    return cand;
}

RateResult solve_exact(const JProblem& pr) {
    std::size_t k = pr.k, m = pr.m;
    std::size_t dim = (k - 1) * (m - 1);
    PlanMat c0 = to_mat(product_plan(pr.rows, pr.cols));

    // Basis of marginal-preserving directions.
    std::vector<PlanMat> basis;
    for (std::size_t a = 0; a + 1 < k && basis.size() < dim; ++a)
        for (std::size_t c = 0; c + 1 < m && basis.size() < dim; ++c) {
            PlanMat b(k, std::vector<double>(m, 0.0));
            b[a][c] = 1.0;
            b[a][m - 1] = -1.0;
            b[k - 1][c] = -1.0;
            b[k - 1][m - 1] = 1.0;
            basis.push_back(std::move(b));
        }

    // Pairs of entries that may not both carry mass.
    std::set<std::pair<std::size_t, std::size_t>> inf_pairs;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d)
                    if (std::isinf(pr.hv(a, b, c, d))) {
                        std::size_t e1 = a * m + c, e2 = b * m + d;
                        inf_pairs.insert({std::min(e1, e2), std::max(e1, e2)});
                    }

    std::size_t entries = k * m;
    std::vector<std::uint32_t> patterns;
    if (inf_pairs.empty()) {
        patterns.push_back(0);
    } else {
        for (std::uint32_t z = 0; z < (1u << entries); ++z) {
            bool covers = true;
            for (const auto& [e1, e2] : inf_pairs)
                if (!((z >> e1) & 1u) && !((z >> e2) & 1u)) {
                    covers = false;
                    break;
                }
            if (covers) patterns.push_back(z);
        }
    }

    auto entry_at = [&](const Vec2& s, std::size_t e) {
        std::size_t a = e / m, c = e % m;
        double v = c0[a][c];
        for (std::size_t t = 0; t < basis.size(); ++t) v += s[t] * basis[t][a][c];
        return v;
    };
    auto plan_at = [&](const Vec2& s) {
        PlanMat c(k, std::vector<double>(m, 0.0));
        for (std::size_t e = 0; e < entries; ++e)
            c[e / m][e % m] = std::max(0.0, entry_at(s, e));
        return c;
    };

    double best = kInf;
    PlanMat best_c;
    for (std::uint32_t z : patterns) {
        // Equalities from the zero pattern, inequalities from the rest.
        std::vector<std::array<double, 3>> eqs; // a0 s0 + a1 s1 + b = 0
        std::vector<LinIneq> ineqs;
        bool inconsistent = false;
        for (std::size_t e = 0; e < entries; ++e) {
            std::size_t a = e / m, c = e % m;
            double b = c0[a][c];
            Vec2 coef{0.0, 0.0};
            for (std::size_t t = 0; t < basis.size(); ++t) coef[t] = basis[t][a][c];
            if ((z >> e) & 1u) {
                if (std::fabs(coef[0]) < 1e-14 && std::fabs(coef[1]) < 1e-14) {
                    if (std::fabs(b) > 1e-12) inconsistent = true;
                } else {
                    eqs.push_back({coef[0], coef[1], b});
                }
            } else {
                ineqs.push_back({b, coef});
            }
        }
        if (inconsistent) continue;

        // Quadratic in the free coordinates.
        Quadratic2 f;
        f.c0 = 0.5 * q_fin(pr, c0, c0);
        for (std::size_t t = 0; t < basis.size(); ++t) f.g[t] = q_fin(pr, c0, basis[t]);
        if (basis.size() >= 1) f.h00 = q_fin(pr, basis[0], basis[0]);
        if (basis.size() >= 2) {
            f.h01 = q_fin(pr, basis[0], basis[1]);
            f.h11 = q_fin(pr, basis[1], basis[1]);
        }

        std::vector<Vec2> cand;
        if (dim == 0) {
            if (eqs.empty()) cand.push_back({0.0, 0.0});
        } else if (eqs.empty()) {
            if (dim == 1) {
                minimize_dim1(f, {0.0, 0.0}, {1.0, 0.0}, ineqs, cand);
            } else {
                cand = minimize_dim2(f, ineqs);
            }
        } else {
            // Reduce the equalities (rank <= dim <= 2).
            if (dim == 1) {
                double a0 = eqs[0][0], b = eqs[0][2];
                if (std::fabs(a0) < 1e-14) continue;
                Vec2 s{-b / a0, 0.0};
                bool consistent = true;
                for (std::size_t t = 1; t < eqs.size(); ++t)
                    if (std::fabs(eqs[t][0] * s[0] + eqs[t][2]) > 1e-10) consistent = false;
                bool ok = consistent;
                for (const auto& in : ineqs)
                    if (in.b + in.a[0] * s[0] < -1e-10) ok = false;
                if (ok) cand.push_back(s);
            } else {
                // dim == 2: solve the first equality for one variable.
                double a0 = eqs[0][0], a1 = eqs[0][1], b = eqs[0][2];
                Vec2 p, d;
                if (std::fabs(a0) >= std::fabs(a1)) {
                    if (std::fabs(a0) < 1e-14) continue;
                    p = {-b / a0, 0.0};
                    d = {-a1 / a0, 1.0};
                } else {
                    p = {0.0, -b / a1};
                    d = {1.0, -a0 / a1};
                }
                if (eqs.size() == 1) {
                    minimize_dim1(f, p, d, ineqs, cand);
                } else {
                    // Intersect with the remaining equalities: either a point,
                    // the same line (all redundant), or nothing.
                    bool found = false, empty = false;
                    Vec2 s{0.0, 0.0};
                    for (std::size_t t = 1; t < eqs.size() && !found && !empty; ++t) {
                        double base = eqs[t][0] * p[0] + eqs[t][1] * p[1] + eqs[t][2];
                        double slope = eqs[t][0] * d[0] + eqs[t][1] * d[1];
                        if (std::fabs(slope) > 1e-14) {
                            double tt = -base / slope;
                            s = {p[0] + tt * d[0], p[1] + tt * d[1]};
                            found = true;
                        } else if (std::fabs(base) > 1e-10) {
                            empty = true;
                        }
                    }
                    if (empty) continue;
                    if (found) {
                        bool ok = true;
                        for (const auto& t : eqs)
                            if (std::fabs(t[0] * s[0] + t[1] * s[1] + t[2]) > 1e-9) ok = false;
                        for (const auto& in : ineqs)
                            if (in.b + in.a[0] * s[0] + in.a[1] * s[1] < -1e-10) ok = false;
                        if (ok) cand.push_back(s);
                    } else {
                        minimize_dim1(f, p, d, ineqs, cand);
                    }
                }
            }
        }

        for (const auto& s : cand) {
            PlanMat c = plan_at(s);
            double v = plan_value(pr, c);
            if (v < best) {
                best = v;
                best_c = std::move(c);
            }
        }
    }

    RateResult res;
    res.method = "exact";
    res.gap = 0.0;
    if (std::isinf(best)) {
        res.value = kInf;
        res.feasible = false;
        res.plan = to_plan(pr, PlanMat(pr.k, std::vector<double>(pr.m, 0.0)));
    } else {
        res.value = best;
        res.plan = to_plan(pr, std::move(best_c));
    }
    return res;
}

} // namespace

RateResult j_alpha_p(const StepGraphon& u, const std::vector<double>& alpha, const Matrix& p,
                     const SolveOptions& opts) {
    check_p_matrix(p, static_cast<int>(p.size()), "j_alpha_p");
    JProblem pr = make_problem(u, alpha, p);

    if (pr.k == 1 || pr.m == 1) {
        // The plan is forced by the marginals.
        PlanMat c(pr.k, std::vector<double>(pr.m, 0.0));
        for (std::size_t a = 0; a < pr.k; ++a)
            for (std::size_t cc = 0; cc < pr.m; ++cc) c[a][cc] = pr.rows[a] * pr.cols[cc];
        double v = plan_value(pr, c);
        RateResult res;
        res.method = "exact";
        res.gap = 0.0;
        res.value = v;
        res.feasible = !std::isinf(v);
        res.plan = to_plan(pr, std::move(c));
        return res;
    }

    bool exact_capable = (pr.k - 1) * (pr.m - 1) <= 2;
    bool exact = opts.mode == SolveMode::Exact ||
                 (opts.mode == SolveMode::Auto && exact_capable);
    if (exact && !exact_capable)
        throw guard_error("j_alpha_p: exact mode requires a transportation polytope of dimension <= 2");
    RateResult res = exact ? solve_exact(pr) : solve_heuristic(pr, opts);

    // The witness must reproduce the value.
    if (res.feasible) {
        double check = plan_value(pr, res.plan.c);
        if (!(std::fabs(check - res.value) <= 1e-9 * std::max(1.0, std::fabs(res.value))))
            throw internal_error("j_alpha_p: witness does not reproduce the reported value");
    }
    return res;
}

namespace {

void simplex_grid(int k, int steps, std::vector<int>& cur, int pos, int left,
                  std::vector<std::vector<double>>& out) {
    if (pos == k - 1) {
        cur[pos] = left;
        std::vector<double> a(k);
        for (int i = 0; i < k; ++i) a[i] = static_cast<double>(cur[i]) / steps;
        out.push_back(std::move(a));
        return;
    }
    for (int c = 0; c <= left; ++c) {
        cur[pos] = c;
        simplex_grid(k, steps, cur, pos + 1, left - c, out);
    }
}

} // namespace

RateResult r_p(const StepGraphon& u, const Matrix& p, const SolveOptions& opts) {
    int k = static_cast<int>(p.size());
    check_p_matrix(p, k, "r_p");

    SolveOptions scan = opts;
    scan.restarts = std::min(opts.restarts, 4);
    scan.iters = std::min(opts.iters, 60);

    std::vector<std::vector<double>> cands;
    {
        std::vector<int> cur(k, 0);
        simplex_grid(k, opts.grid, cur, 0, opts.grid, cands);
    }
    cands.push_back(std::vector<double>(k, 1.0 / k));
    if (static_cast<int>(u.parts()) == k) cands.push_back(u.measures());

    double best = kInf;
    std::vector<double> best_alpha(k, 1.0 / k);
    for (const auto& a : cands) {
        bool zero = true;
        for (double x : a) zero = zero && x == 0.0;
        if (zero) continue;
        RateResult r = j_alpha_p(u, a, p, scan);
        if (r.value < best) {
            best = r.value;
            best_alpha = a;
        }
    }

    // Local pattern search on the simplex around the best grid cell.
    int budget = opts.refine_budget;
    double step = 0.5 / opts.grid;
    while (budget > 0 && step > 1e-5) {
        bool improved = false;
        for (int i = 0; i < k && budget > 0; ++i)
            for (int j = 0; j < k && budget > 0; ++j) {
                if (i == j || best_alpha[i] < step) continue;
                std::vector<double> a = best_alpha;
                a[i] -= step;
                a[j] += step;
                RateResult r = j_alpha_p(u, a, p, scan);
                --budget;
                if (r.value < best - 1e-15) {
                    best = r.value;
                    best_alpha = a;
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
    }

    RateResult fin = j_alpha_p(u, best_alpha, p, opts);
    if (fin.value > best + 1e-12) {
        // Keep the better scan result if the final solve regressed.
        fin = j_alpha_p(u, best_alpha, p, scan);
    }
    fin.alpha = best_alpha;
    return fin;
}

RateResult k_w_step(const StepGraphon& w_in, const StepGraphon& u_in) {
    StepGraphon w = w_in.canonical();
    StepGraphon u = u_in.canonical();
    RateResult res;
    res.method = "exact";
    res.gap = 0.0;
    if (w.parts() != u.parts()) {
        res.value = kInf;
        res.feasible = false;
        return res;
    }
    std::size_t m = w.parts();
    double tol = policy().match_tol;

    // Backtracking search over value-matching permutations.
    std::vector<int> sigma(m, -1);
    std::vector<bool> used(m, false);
    double best = kInf;
    std::vector<int> best_sigma;

    auto consistent = [&](std::size_t i, int cand) {
        if (std::fabs(u.value(cand, cand) - w.value(i, i)) > tol) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (std::fabs(u.value(sigma[j], cand) - w.value(j, i)) > tol) return false;
        return true;
    };
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == m) {
            Kahan s;
            for (std::size_t t = 0; t < m; ++t) {
                double bp = u.measure(sigma[t]);
                s.add(bp * std::log(bp / w.measure(t)));
            }
            double v = s.value();
            if (v < best) {
                best = v;
                best_sigma.assign(sigma.begin(), sigma.end());
            }
            return;
        }
        for (std::size_t c = 0; c < m; ++c) {
            if (used[c] || !consistent(i, static_cast<int>(c))) continue;
            used[c] = true;
            sigma[i] = static_cast<int>(c);
            self(self, i + 1);
            used[c] = false;
        }
    };
    rec(rec, 0);

    if (best_sigma.empty()) {
        res.value = kInf;
        res.feasible = false;
    } else {
        res.value = std::max(0.0, best);
        res.sigma = best_sigma;
    }
    return res;
}

double discrete_rel_entropy(const std::vector<long>& counts, long n,
                            const std::vector<double>& beta) {
    if (counts.size() != beta.size())
        throw config_error("discrete_rel_entropy: counts and beta lengths must match");
    long total = 0;
    for (long c : counts) {
        if (c < 0) throw config_error("discrete_rel_entropy: counts must be nonnegative");
        total += c;
    }
    if (total != n) throw config_error("discrete_rel_entropy: counts must sum to n (marginal mismatch)");
    double bsum = 0.0;
    for (double b : beta) {
        if (!(b >= 0.0)) throw config_error("discrete_rel_entropy: beta must be nonnegative");
        bsum += b;
    }
    if (std::fabs(bsum - 1.0) > 1e-9)
        throw config_error("discrete_rel_entropy: beta must be a probability vector");
    Kahan s;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        if (beta[i] == 0.0) return kInf;
        double f = static_cast<double>(counts[i]) / static_cast<double>(n);
        s.add(f * std::log(f / beta[i]));
    }
    return std::max(0.0, s.value());
}

bool rn_member(const StepGraphon& w, const StepGraphon& u) {
    return !std::isinf(k_w_step(w, u).value);
}

bool forb_consistent(const StepGraphon& w, const StepGraphon& u, int max_size) {
    if (max_size > 4) throw guard_error("forb_consistent: max_size <= 4 required");
    for (int nv = 1; nv <= max_size; ++nv) {
        for (std::uint32_t rep : iso_class_reps(nv)) {
            SimpleGraph f = SimpleGraph::from_edge_mask(nv, rep);
            if (induced_density(f, w) <= 1e-12 && induced_density(f, u) > 1e-12) return false;
        }
    }
    return true;
}

} // namespace gldp
