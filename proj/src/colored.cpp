#include "colored.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "policy.hpp"

namespace gldp {

ColoredStepGraphon::ColoredStepGraphon(StepGraphon g, std::vector<int> colors, int k)
    : g_(std::move(g)), colors_(std::move(colors)), k_(k) {
    if (k_ < 1) throw config_error("ColoredStepGraphon: k >= 1 required");
    if (colors_.size() != g_.parts())
        throw config_error("ColoredStepGraphon: one color per part required");
    for (int c : colors_)
        if (c < 0 || c >= k_) throw config_error("ColoredStepGraphon: color index out of range");
}

ColoredStepGraphon ColoredStepGraphon::permuted(const std::vector<int>& perm) const {
    std::vector<int> cols(colors_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) cols[i] = colors_[perm[i]];
    return ColoredStepGraphon(g_.permuted(perm), std::move(cols), k_);
}

namespace {

struct ColoredRefinement {
    std::vector<double> w;
    std::vector<int> cu, cv; // cell colors on each side
    Matrix u, v;             // cell-level kernels
};

ColoredRefinement refine(const ColoredStepGraphon& x, const ColoredStepGraphon& y) {
    Refinement r = common_refinement(x.graphon(), y.graphon());
    std::size_t m = r.measures.size();
    ColoredRefinement cr;
    cr.w = r.measures;
    cr.cu.resize(m);
    cr.cv.resize(m);
    cr.u = Matrix(m);
    cr.v = Matrix(m);
    for (std::size_t c = 0; c < m; ++c) {
        cr.cu[c] = x.color(r.left_part[c]);
        cr.cv[c] = y.color(r.right_part[c]);
        for (std::size_t d = 0; d < m; ++d) {
            cr.u(c, d) = x.graphon().value(r.left_part[c], r.left_part[d]);
            cr.v(c, d) = y.graphon().value(r.right_part[c], r.right_part[d]);
        }
    }
    return cr;
}

// Exact sup over x, y in {0,1}^m of sum_{i,j} |L_ij(x,y)|.  For fixed x the
// inner max over y equals max over sign patterns sigma of the linear response
// sum_d max(0, sum_ij sigma_ij S_d[ij]); both maxima are exact because every
// term is bilinear, so the sum of absolute values is convex coordinatewise and
// peaks at cube vertices.
double sup_term(const ColoredRefinement& cr, int k) {
    std::size_t m = cr.w.size();
    int kk = k * k;
    std::vector<double> s(m * kk, 0.0); // S[d][q], q = i*k+j
    double best = 0.0;

    std::uint32_t xbits = 0;
    std::vector<double> dot(m);
    std::uint64_t total = 1ull << m;
    for (std::uint64_t g = 1; g < total; ++g) {
        // Gray-code walk over subsets: step g toggles bit ctz(g).
        int c = __builtin_ctzll(g);
        double sgn = (xbits >> c) & 1u ? -1.0 : 1.0;
        xbits ^= 1u << c;
        for (std::size_t d = 0; d < m; ++d) {
            double wcd = cr.w[c] * cr.w[d];
            s[d * kk + cr.cu[c] * k + cr.cu[d]] += sgn * wcd * cr.u(c, d);
            s[d * kk + cr.cv[c] * k + cr.cv[d]] -= sgn * wcd * cr.v(c, d);
        }
        // sigma = all -1 start.
        for (std::size_t d = 0; d < m; ++d) {
            double t = 0.0;
            for (int q = 0; q < kk; ++q) t -= s[d * kk + q];
            dot[d] = t;
        }
        std::uint32_t sbits = 0;
        std::uint64_t stotal = 1ull << kk;
        for (std::uint64_t h = 0;; ++h) {
            double val = 0.0;
            for (std::size_t d = 0; d < m; ++d) val += std::max(0.0, dot[d]);
            best = std::max(best, val);
            if (h + 1 >= stotal) break;
            int q = __builtin_ctzll(h + 1);
            double flip = (sbits >> q) & 1u ? -2.0 : 2.0;
            sbits ^= 1u << q;
            for (std::size_t d = 0; d < m; ++d) dot[d] += flip * s[d * kk + q];
        }
    }
    return best;
}

} // namespace

double colored_cut_norm(const ColoredStepGraphon& x, const ColoredStepGraphon& y) {
    if (x.k() != y.k()) throw config_error("colored_cut_norm: color counts must match");
    int k = x.k();
    ColoredRefinement cr = refine(x, y);
    std::size_t m = cr.w.size();
    if (m > 20 || m + static_cast<std::size_t>(k) * k > 26)
        throw guard_error("colored_cut_norm: refinement too large for exhaustive search");

    double sym_diff = 0.0;
    for (std::size_t c = 0; c < m; ++c)
        if (cr.cu[c] != cr.cv[c]) sym_diff += 2.0 * cr.w[c];
    return sup_term(cr, k) + sym_diff;
}

double colored_cut_dist_labeled(const ColoredStepGraphon& x, const ColoredStepGraphon& y) {
    std::size_t m = x.graphon().parts();
    if (y.graphon().parts() != m)
        throw config_error("colored_cut_dist_labeled: equal part counts required");
    if (x.k() != y.k()) throw config_error("colored_cut_dist_labeled: color counts must match");
    if (m > 8) throw guard_error("colored_cut_dist_labeled: at most 8 parts supported");
    double tol = policy().abs_tol;
    for (std::size_t i = 0; i < m; ++i)
        if (std::fabs(x.graphon().measure(i) - 1.0 / m) > tol ||
            std::fabs(y.graphon().measure(i) - 1.0 / m) > tol)
            throw config_error("colored_cut_dist_labeled: equal-measure parts required");

    double best = kInf;
    for (const auto& perm : all_permutations(static_cast<int>(m))) {
        best = std::min(best, colored_cut_norm(x, y.permuted(perm)));
        if (best <= 1e-15) break;
    }
    return best;
}

} // namespace gldp
