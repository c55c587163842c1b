#include "sampling.hpp"

#include <cmath>

#include "errors.hpp"

namespace gldp {

namespace {

int label_from_unit(const StepGraphon& w, double u) {
    // Dividing points belong to their right interval.
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < w.parts(); ++i) {
        acc += w.measure(i);
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(w.parts()) - 1;
}

} // namespace

std::vector<int> sample_labels(const StepGraphon& w, int n, const SeedSpec& seed) {
    if (n < 1) throw config_error("sample: n >= 1 required");
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        StreamRng rng = seed.vertex_stream(static_cast<std::uint64_t>(i));
        labels[i] = label_from_unit(w, rng.next_unit());
    }
    return labels;
}

SimpleGraph sample_wrandom(const StepGraphon& w, int n, const SeedSpec& seed) {
    std::vector<int> labels = sample_labels(w, n, seed);
    SimpleGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            StreamRng rng = seed.edge_stream(i, j);
            if (rng.next_unit() < w.value(labels[i], labels[j])) g.set_edge(i, j);
        }
    return g;
}

SimpleGraph sample_sbm(const std::vector<int>& a, const Matrix& p, const SeedSpec& seed) {
    long n = 0;
    for (int x : a) {
        if (x < 0) throw config_error("sample_sbm: block sizes must be nonnegative");
        n += x;
    }
    if (n < 1) throw config_error("sample_sbm: |a|_1 >= 1 required");
    if (p.size() != a.size()) throw config_error("sample_sbm: block count and matrix size must match");

    std::vector<int> label(n);
    int v = 0;
    for (std::size_t b = 0; b < a.size(); ++b)
        for (int t = 0; t < a[b]; ++t) label[v++] = static_cast<int>(b);

    SimpleGraph g(static_cast<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            StreamRng rng = seed.edge_stream(i, j);
            if (rng.next_unit() < p(label[i], label[j])) g.set_edge(i, j);
        }
    return g;
}

WeightedGraph sample_weighted(const StepGraphon& w, int n, const SeedSpec& seed) {
    std::vector<int> labels = sample_labels(w, n, seed);
    WeightedGraph h(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) h.set_weight(i, j, w.value(labels[i], labels[j]));
    return h;
}

SimpleGraph round_weighted(const WeightedGraph& h, const SeedSpec& seed) {
    int n = h.n();
    SimpleGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            StreamRng rng = seed.edge_stream(i, j);
            if (rng.next_unit() < h.weight(i, j)) g.set_edge(i, j);
        }
    return g;
}

double SbmCouple::certified_upper() const {
    auto bound = [](int total, int kept) {
        double s = static_cast<double>(kept) / total;
        return 2.0 * (1.0 / s - 1.0);
    };
    return bound(g.n(), static_cast<int>(matched.size())) +
           bound(h.n(), static_cast<int>(matched.size()));
}

SbmCouple couple_sbm(const std::vector<int>& a, const std::vector<int>& b, const Matrix& p,
                     double eps, const SeedSpec& seed) {
    if (a.size() != b.size()) throw config_error("couple_sbm: block vectors must have equal length");
    if (p.size() != a.size()) throw config_error("couple_sbm: block count and matrix size must match");
    long na = 0, nb = 0, l1 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0 || b[i] < 0) throw config_error("couple_sbm: block sizes must be nonnegative");
        na += a[i];
        nb += b[i];
        l1 += std::labs(static_cast<long>(a[i]) - b[i]);
    }
    if (na < 1 || nb < 1) throw config_error("couple_sbm: both models need at least one vertex");
    if (static_cast<double>(l1) > eps * static_cast<double>(std::min(na, nb)) + 1e-12)
        throw config_error("couple_sbm: |b - a|_1 exceeds eps * min(|a|_1, |b|_1)");

    std::size_t k = a.size();
    // Block offsets (consecutive intervals) and matched prefixes.
    std::vector<int> offa(k + 1, 0), offb(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i) {
        offa[i + 1] = offa[i] + a[i];
        offb[i + 1] = offb[i] + b[i];
    }

    // shared id of a matched vertex: (block, rank); rank < min(a_i, b_i).
    auto shared_code = [&](int block, int rank) {
        return (static_cast<std::uint64_t>(block) << 32) | static_cast<std::uint64_t>(rank);
    };
    auto block_of = [&](const std::vector<int>& off, int v) {
        int blk = 0;
        while (v >= off[blk + 1]) ++blk;
        return blk;
    };
    auto matched_rank = [&](const std::vector<int>& off, int v, int blk, int cap) {
        int r = v - off[blk];
        return r < cap ? r : -1;
    };

    SbmCouple out;
    out.g = SimpleGraph(static_cast<int>(na));
    out.h = SimpleGraph(static_cast<int>(nb));
    for (std::size_t i = 0; i < k; ++i) {
        int c = std::min(a[i], b[i]);
        for (int r = 0; r < c; ++r)
            out.matched.emplace_back(offa[i] + r, offb[i] + r);
    }

    auto fill = [&](SimpleGraph& g, const std::vector<int>& off, const std::vector<int>& sizes,
                    char indep_tag) {
        int n = g.n();
        (void)sizes;
        for (int x = 0; x < n; ++x) {
            int bx = block_of(off, x);
            int capx = std::min(a[bx], b[bx]);
            int rx = matched_rank(off, x, bx, capx);
            for (int y = x + 1; y < n; ++y) {
                int by = block_of(off, y);
                int capy = std::min(a[by], b[by]);
                int ry = matched_rank(off, y, by, capy);
                StreamRng rng(0);
                if (rx >= 0 && ry >= 0) {
                    // Both endpoints matched: use the shared coin.
                    std::uint64_t c1 = shared_code(bx, rx), c2 = shared_code(by, ry);
                    if (c1 > c2) std::swap(c1, c2);
                    rng = seed.tagged_stream('s', c1, c2);
                } else {
                    rng = seed.tagged_stream(indep_tag, static_cast<std::uint64_t>(x),
                                             static_cast<std::uint64_t>(y));
                }
                if (rng.next_unit() < p(bx, by)) g.set_edge(x, y);
            }
        }
    };
    fill(out.g, offa, a, 'a');
    fill(out.h, offb, b, 'b');
    return out;
}

std::pair<WeightedGraph, SimpleGraph> couple_weighted_rounded(const StepGraphon& w, int n,
                                                              const SeedSpec& seed) {
    WeightedGraph h = sample_weighted(w, n, seed);
    SimpleGraph g = round_weighted(h, seed);
    return {std::move(h), std::move(g)};
}

} // namespace gldp
