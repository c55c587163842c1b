#include "step_graphon.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "policy.hpp"

namespace gldp {

StepGraphon::StepGraphon(std::vector<double> measures, Matrix values)
    : measures_(std::move(measures)), values_(std::move(values)) {
    const auto& pol = policy();
    std::size_t m = measures_.size();
    if (m < 1) throw config_error("StepGraphon: at least one part required");
    if (values_.size() != m) throw config_error("StepGraphon: value matrix size must match part count");
    double sum = 0.0;
    for (double& x : measures_) {
        if (!std::isfinite(x)) throw config_error("StepGraphon: part measures must be finite");
        if (x < -pol.abs_tol) throw config_error("StepGraphon: part measures must be nonnegative");
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (std::fabs(sum - 1.0) > pol.abs_tol)
        throw config_error("StepGraphon: part measures must sum to 1");
    if (!values_.symmetric(pol.sym_tol)) throw config_error("StepGraphon: value matrix must be symmetric");
    values_.symmetrize();
    for (double& v : values_.data()) {
        if (!std::isfinite(v) || v < -pol.abs_tol || v > 1.0 + pol.abs_tol)
            throw config_error("StepGraphon: values must lie in [0,1]");
        v = std::clamp(v, 0.0, 1.0);
    }
}

std::vector<double> StepGraphon::boundaries() const {
    std::vector<double> b(parts() + 1, 0.0);
    for (std::size_t i = 0; i < parts(); ++i) b[i + 1] = b[i] + measures_[i];
    b[parts()] = 1.0;
    return b;
}

StepGraphon StepGraphon::drop_null_parts() const {
    std::vector<int> keep;
    for (std::size_t i = 0; i < parts(); ++i)
        if (measures_[i] > 0.0) keep.push_back(static_cast<int>(i));
    if (keep.size() == parts()) return *this;
    if (keep.empty()) throw internal_error("StepGraphon: all parts have zero measure");
    std::vector<double> ms(keep.size());
    Matrix vals(keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a) {
        ms[a] = measures_[keep[a]];
        for (std::size_t b = 0; b < keep.size(); ++b) vals(a, b) = values_(keep[a], keep[b]);
    }
    return StepGraphon(std::move(ms), std::move(vals));
}

StepGraphon StepGraphon::canonical(double tol) const {
    if (tol < 0.0) tol = policy().abs_tol;
    StepGraphon g = drop_null_parts();
    // Merge parts c < d when row_c == row_d entrywise and the diagonal block
    // {cc, cd, dd} is constant, iterating until no merge applies.
    bool merged = true;
    while (merged && g.parts() > 1) {
        merged = false;
        std::size_t m = g.parts();
        for (std::size_t c = 0; c < m && !merged; ++c) {
            for (std::size_t d = c + 1; d < m && !merged; ++d) {
                bool same = std::fabs(g.values_(c, c) - g.values_(c, d)) <= tol &&
                            std::fabs(g.values_(c, c) - g.values_(d, d)) <= tol;
                for (std::size_t j = 0; same && j < m; ++j) {
                    if (j == c || j == d) continue;
                    if (std::fabs(g.values_(c, j) - g.values_(d, j)) > tol) same = false;
                }
                if (!same) continue;
                std::vector<double> ms;
                Matrix vals(m - 1);
                std::vector<std::size_t> keep;
                for (std::size_t i = 0; i < m; ++i)
                    if (i != d) keep.push_back(i);
                for (std::size_t a = 0; a < keep.size(); ++a) {
                    ms.push_back(g.measures_[keep[a]]);
                    for (std::size_t b = 0; b < keep.size(); ++b)
                        vals(a, b) = g.values_(keep[a], keep[b]);
                }
                ms[c] += g.measures_[d];
                g = StepGraphon(std::move(ms), std::move(vals));
                merged = true;
            }
        }
    }
    return g;
}

StepGraphon StepGraphon::permuted(const std::vector<int>& perm) const {
    std::size_t m = parts();
    if (perm.size() != m) throw config_error("StepGraphon: permutation length mismatch");
    std::vector<double> ms(m);
    Matrix vals(m);
    for (std::size_t i = 0; i < m; ++i) {
        ms[i] = measures_[perm[i]];
        for (std::size_t j = 0; j < m; ++j) vals(i, j) = values_(perm[i], perm[j]);
    }
    return StepGraphon(std::move(ms), std::move(vals));
}

bool StepGraphon::zero_one_valued(double tol) const {
    for (double v : values_.data())
        if (v > tol && v < 1.0 - tol) return false;
    return true;
}

StepGraphon StepGraphon::constant(double p) {
    Matrix v(1);
    v(0, 0) = p;
    return StepGraphon({1.0}, std::move(v));
}

IntervalList::IntervalList(std::vector<std::pair<double, double>> iv) : intervals(std::move(iv)) {
    for (const auto& [a, b] : intervals) {
        if (a < 0.0 || b > 1.0 || !(a < b))
            throw config_error("IntervalList: intervals must be nonempty subsets of [0,1]");
    }
    auto sorted = intervals;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i].second > sorted[i + 1].first + 1e-15)
            throw config_error("IntervalList: intervals must be pairwise disjoint");
}

StepGraphon graph_to_graphon(const SimpleGraph& g) {
    int n = g.n();
    if (n < 1) throw config_error("graph_to_graphon: n >= 1 required");
    std::vector<double> ms(n, 1.0 / n);
    Matrix vals(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vals(i, j) = g.edge(i, j) ? 1.0 : 0.0;
    return StepGraphon(std::move(ms), std::move(vals));
}

StepGraphon weighted_to_graphon(const WeightedGraph& h) {
    int n = h.n();
    if (n < 1) throw config_error("weighted_to_graphon: n >= 1 required");
    std::vector<double> ms(n, 1.0 / n);
    Matrix vals(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vals(i, j) = i == j ? 0.0 : h.weight(i, j);
    return StepGraphon(std::move(ms), std::move(vals));
}

StepGraphon reweight(const StepGraphon& w, const std::vector<double>& mu) {
    if (mu.size() != w.parts()) throw config_error("reweight: measure vector length mismatch");
    double sum = 0.0;
    for (double x : mu) {
        if (x < 0.0) throw config_error("reweight: measures must be nonnegative");
        sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw config_error("reweight: measures must sum to 1");
    Matrix vals = w.values();
    return StepGraphon(mu, std::move(vals)).drop_null_parts();
}

StretchResult stretch(const StepGraphon& u, double s) {
    if (!(s > 0.0) || s > 1.0) throw config_error("stretch: s must lie in (0,1]");
    auto b = u.boundaries();
    std::size_t m = u.parts();
    // Overlap of each part with [0,s], rescaled to a probability vector.
    std::vector<double> overlap(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double lo = std::min(b[i], s), hi = std::min(b[i + 1], s);
        overlap[i] = std::max(0.0, hi - lo) / s;
    }
    double osum = vec_sum(overlap);
    for (double& x : overlap) x /= osum;

    std::vector<int> kept;
    for (std::size_t i = 0; i < m; ++i)
        if (overlap[i] > 0.0) kept.push_back(static_cast<int>(i));
    std::vector<double> ms;
    Matrix vals(kept.size());
    for (std::size_t a = 0; a < kept.size(); ++a) {
        ms.push_back(overlap[kept[a]]);
        for (std::size_t c = 0; c < kept.size(); ++c) vals(a, c) = u.value(kept[a], kept[c]);
    }
    StepGraphon out(std::move(ms), std::move(vals));

    // Canonical coupling: keep mass on the diagonal first, then match the row
    // surplus to the column deficit in index order.
    std::vector<std::vector<double>> plan(m, std::vector<double>(kept.size(), 0.0));
    std::vector<double> row_left = u.measures();
    std::vector<double> col_left = out.measures();
    for (std::size_t a = 0; a < kept.size(); ++a) {
        std::size_t i = kept[a];
        double d = std::min(row_left[i], col_left[a]);
        plan[i][a] = d;
        row_left[i] -= d;
        col_left[a] -= d;
    }
    std::size_t a = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (row_left[i] > 1e-15 && a < kept.size()) {
            double d = std::min(row_left[i], col_left[a]);
            if (d > 0.0) {
                plan[i][a] += d;
                row_left[i] -= d;
                col_left[a] -= d;
            }
            if (col_left[a] <= 1e-15)
                ++a;
            else
                break;
        }
    }
    return StretchResult{std::move(out), std::move(plan)};
}

Refinement common_refinement(const StepGraphon& u, const StepGraphon& v) {
    auto bu = u.boundaries();
    auto bv = v.boundaries();
    std::vector<double> b;
    b.reserve(bu.size() + bv.size());
    b.insert(b.end(), bu.begin(), bu.end());
    b.insert(b.end(), bv.begin(), bv.end());
    std::sort(b.begin(), b.end());
    // Coincident boundaries merge; zero-length cells disappear with them.
    std::vector<double> cuts{0.0};
    for (double x : b)
        if (x - cuts.back() > policy().abs_tol) cuts.push_back(x);
    cuts.back() = 1.0;

    Refinement r;
    std::size_t iu = 0, iv = 0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        double mid = 0.5 * (cuts[c] + cuts[c + 1]);
        while (iu + 1 < bu.size() - 1 && bu[iu + 1] <= mid) ++iu;
        while (iv + 1 < bv.size() - 1 && bv[iv + 1] <= mid) ++iv;
        r.measures.push_back(cuts[c + 1] - cuts[c]);
        r.left_part.push_back(static_cast<int>(iu));
        r.right_part.push_back(static_cast<int>(iv));
    }
    return r;
}

std::pair<StepGraphon, StepGraphon> common_refinement_pair(const StepGraphon& u,
                                                           const StepGraphon& v) {
    Refinement r = common_refinement(u, v);
    std::size_t m = r.measures.size();
    Matrix a(m), b(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            a(i, j) = u.value(r.left_part[i], r.left_part[j]);
            b(i, j) = v.value(r.right_part[i], r.right_part[j]);
        }
    return {StepGraphon(r.measures, std::move(a)), StepGraphon(r.measures, std::move(b))};
}

StepGraphon localize(const StepGraphon& w, const IntervalList& targets,
                     const std::vector<double>& masses) {
    if (targets.intervals.size() != masses.size())
        throw config_error("localize: interval and mass counts must match");
    if (masses.empty()) throw config_error("localize: at least one target required");
    double sum = 0.0;
    for (double x : masses) {
        if (x < 0.0) throw config_error("localize: masses must be nonnegative");
        sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw config_error("localize: masses must sum to 1");

    auto b = w.boundaries();
    // Each target interval contributes the pieces of w's parts it overlaps,
    // scaled so the block carries the requested mass.
    std::vector<double> ms;
    std::vector<int> src;
    for (std::size_t t = 0; t < targets.intervals.size(); ++t) {
        auto [lo, hi] = targets.intervals[t];
        double len = hi - lo;
        for (std::size_t i = 0; i < w.parts(); ++i) {
            double l = std::max(b[i], lo), h = std::min(b[i + 1], hi);
            if (h - l <= 1e-15) continue;
            ms.push_back(masses[t] * (h - l) / len);
            src.push_back(static_cast<int>(i));
        }
    }
    if (ms.empty()) throw internal_error("localize: no mass placed");
    Matrix vals(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = 0; j < ms.size(); ++j) vals(i, j) = w.value(src[i], src[j]);
    double tot = vec_sum(ms);
    for (double& x : ms) x /= tot;
    return StepGraphon(std::move(ms), std::move(vals)).drop_null_parts();
}

SimpleGraph blowup(const SimpleGraph& f, int m) {
    if (m < 1) throw config_error("blowup: m >= 1 required");
    int k = f.n();
    SimpleGraph g(k * m);
    for (int i = 0; i < k * m; ++i)
        for (int j = i + 1; j < k * m; ++j) {
            int ci = i % k, cj = j % k;
            if (ci != cj && f.edge(ci, cj)) g.set_edge(i, j);
        }
    return g;
}

} // namespace gldp
