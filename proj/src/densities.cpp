#include "densities.hpp"

#include <algorithm>
#include <cmath>

#include "cutnorm.hpp"
#include "errors.hpp"
#include "policy.hpp"

namespace gldp {

namespace {

// Vertices with degree zero contribute a factor of 1 to both densities.
std::vector<int> non_isolated(const SimpleGraph& f) {
    std::vector<int> keep;
    for (int i = 0; i < f.n(); ++i) {
        bool any = false;
        for (int j = 0; j < f.n() && !any; ++j) any = f.edge(i, j);
        if (any) keep.push_back(i);
    }
    return keep;
}

void check_size_guard(std::size_t m, int k) {
    double work = std::pow(static_cast<double>(m), k);
    if (work > 1e8)
        throw guard_error("density: m^|V(F)| exceeds 1e8; reduce the graph or the part count");
}

// Generic phi-sum over part assignments with product pruning.  induced
// selects t_ind (non-edges weighted by 1 - value).
double phi_sum(const SimpleGraph& f, const std::vector<int>& verts, const StepGraphon& w,
               bool induced) {
    int k = static_cast<int>(verts.size());
    std::size_t m = w.parts();
    if (k == 0) return 1.0;
    check_size_guard(m, k);

    Kahan total;
    std::vector<int> assign(k, 0);
    std::vector<double> partial(k + 1, 1.0);
    int depth = 0;
    while (depth >= 0) {
        if (assign[depth] == static_cast<int>(m)) {
            assign[depth] = 0;
            --depth;
            if (depth >= 0) ++assign[depth];
            continue;
        }
        double prod = partial[depth] * w.measure(assign[depth]);
        for (int t = 0; t < depth && prod != 0.0; ++t) {
            int a = verts[t], b = verts[depth];
            double v = w.value(assign[t], assign[depth]);
            if (f.edge(a, b))
                prod *= v;
            else if (induced)
                prod *= 1.0 - v;
        }
        if (prod == 0.0) {
            ++assign[depth];
            continue;
        }
        if (depth == k - 1) {
            total.add(prod);
            ++assign[depth];
        } else {
            partial[depth + 1] = prod;
            ++depth;
        }
    }
    return total.value();
}

} // namespace

double hom_density(const SimpleGraph& f, const StepGraphon& w) {
    std::vector<int> verts = non_isolated(f);
    int k = static_cast<int>(verts.size());
    std::size_t m = w.parts();
    if (k == 2) {
        Kahan s;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                s.add(w.measure(i) * w.measure(j) * w.value(i, j));
        return s.value();
    }
    if (k == 3) {
        check_size_guard(m, 3);
        int a = verts[0], b = verts[1], c = verts[2];
        bool ab = f.edge(a, b), ac = f.edge(a, c), bc = f.edge(b, c);
        Kahan s;
        for (std::size_t i = 0; i < m; ++i) {
            double wi = w.measure(i);
            if (wi == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                double wj = wi * w.measure(j);
                if (wj == 0.0) continue;
                double pij = ab ? w.value(i, j) : 1.0;
                if (pij == 0.0) continue;
                double row = 0.0;
                for (std::size_t l = 0; l < m; ++l) {
                    double t = w.measure(l);
                    if (ac) t *= w.value(i, l);
                    if (bc) t *= w.value(j, l);
                    row += t;
                }
                s.add(wj * pij * row);
            }
        }
        return s.value();
    }
    return phi_sum(f, verts, w, false);
}

double induced_density(const SimpleGraph& f, const StepGraphon& w) {
    std::vector<int> verts(f.n());
    for (int i = 0; i < f.n(); ++i) verts[i] = i;
    return phi_sum(f, verts, w, true);
}

bool hom_density_relation_check(const SimpleGraph& f, const StepGraphon& w) {
    int n = f.n();
    if (n > 4) throw guard_error("hom_density_relation_check: |V(F)| <= 4 required");
    double lhs = hom_density(f, w);
    std::uint32_t base = f.edge_mask();
    std::uint32_t full = (1u << pair_count(n)) - 1;
    std::uint32_t free_pairs = full & ~base;
    // Sum t_ind over all supergraphs: iterate subsets of the non-edges of F.
    Kahan rhs;
    std::uint32_t sub = 0;
    while (true) {
        rhs.add(induced_density(SimpleGraph::from_edge_mask(n, base | sub), w));
        if (sub == free_pairs) break;
        sub = (sub - free_pairs) & free_pairs;
    }
    return std::fabs(lhs - rhs.value()) <= 1e-10;
}

double GraphDistribution::total() const { return vec_sum(probs); }

namespace {

GraphDistribution distribution_from_assignments(int n, std::size_t m,
                                                const std::vector<double>& part_measure,
                                                const Matrix& values) {
    int np = pair_count(n);
    std::size_t total = 1ull << np;
    std::vector<double> sum(total, 0.0), comp(total, 0.0);
    std::vector<double> cond(total);
    std::vector<int> assign(n, 0);
    std::vector<double> q(np);

    while (true) {
        double weight = 1.0;
        for (int v = 0; v < n; ++v) weight *= part_measure[assign[v]];
        if (weight > 0.0) {
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    q[pair_index(n, i, j)] = values(assign[i], assign[j]);
            // Expand the product measure over all 2^pairs graphs.
            cond[0] = weight;
            for (int t = 0; t < np; ++t) {
                std::size_t block = 1ull << t;
                for (std::size_t s = 0; s < block; ++s) {
                    double base = cond[s];
                    cond[s | block] = base * q[t];
                    cond[s] = base * (1.0 - q[t]);
                }
            }
            for (std::size_t g = 0; g < total; ++g) {
                // Kahan accumulation per entry.
                double x = cond[g];
                double t = sum[g] + x;
                if (std::fabs(sum[g]) >= std::fabs(x))
                    comp[g] += (sum[g] - t) + x;
                else
                    comp[g] += (x - t) + sum[g];
                sum[g] = t;
            }
        }
        int v = n - 1;
        while (v >= 0 && assign[v] == static_cast<int>(m) - 1) {
            assign[v] = 0;
            --v;
        }
        if (v < 0) break;
        ++assign[v];
    }
    GraphDistribution dist;
    dist.n = n;
    dist.probs.resize(total);
    for (std::size_t g = 0; g < total; ++g) dist.probs[g] = sum[g] + comp[g];
    return dist;
}

} // namespace

GraphDistribution exact_distribution(const StepGraphon& w, int n) {
    if (n < 1 || n > 6) throw guard_error("exact_distribution: 1 <= n <= 6 required");
    check_size_guard(w.parts(), n);
    return distribution_from_assignments(n, w.parts(), w.measures(), w.values());
}

GraphDistribution sbm_exact_distribution(const std::vector<int>& a, const Matrix& p) {
    int k = static_cast<int>(a.size());
    if (static_cast<int>(p.size()) != k)
        throw config_error("sbm_exact_distribution: block count and matrix size must match");
    if (!p.symmetric(policy().sym_tol))
        throw config_error("sbm_exact_distribution: edge matrix must be symmetric");
    long n = 0;
    for (int x : a) {
        if (x < 0) throw config_error("sbm_exact_distribution: block sizes must be nonnegative");
        n += x;
    }
    if (n < 1 || n > 6) throw guard_error("sbm_exact_distribution: 1 <= |a|_1 <= 6 required");

    // Consecutive-interval block assignment, then a single product expansion.
    std::vector<int> label(n);
    int v = 0;
    for (int b = 0; b < k; ++b)
        for (int t = 0; t < a[b]; ++t) label[v++] = b;

    int np = pair_count(static_cast<int>(n));
    std::size_t total = 1ull << np;
    GraphDistribution dist;
    dist.n = static_cast<int>(n);
    dist.probs.assign(total, 0.0);
    dist.probs[0] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int t = pair_index(static_cast<int>(n), i, j);
            std::size_t block = 1ull << t;
            double q = p(label[i], label[j]);
            for (std::size_t s = 0; s < block; ++s) {
                double base = dist.probs[s];
                dist.probs[s | block] = base * q;
                dist.probs[s] = base * (1.0 - q);
            }
        }
    return dist;
}

StepGraphon align_center_parts(const StepGraphon& center, int n) {
    std::size_t cm = center.parts();
    if (static_cast<int>(cm) == n) return center;
    double tol = policy().abs_tol;
    bool equal = true;
    for (std::size_t i = 0; i < cm; ++i)
        if (std::fabs(center.measure(i) - 1.0 / static_cast<double>(cm)) > tol) equal = false;
    if (!equal || n % static_cast<int>(cm) != 0)
        throw guard_error("ball_mass: center parts incompatible with the labeled metric");
    int rep = n / static_cast<int>(cm);
    std::vector<double> ms(n, 1.0 / n);
    Matrix vals(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) vals(i, j) = center.value(i / rep, j / rep);
    return StepGraphon(std::move(ms), std::move(vals));
}

double ball_mass(const GraphDistribution& dist, const StepGraphon& center, double radius,
                 long* count) {
    int n = dist.n;
    StepGraphon c = align_center_parts(center, n);

    const auto& canon = canonical_table(n);
    std::vector<signed char> decided(canon.size(), -1);
    Kahan mass;
    long cnt = 0;
    for (std::uint32_t g = 0; g < canon.size(); ++g) {
        std::uint32_t rep = canon[g];
        if (decided[rep] < 0) {
            StepGraphon fg = graph_to_graphon(SimpleGraph::from_edge_mask(n, rep));
            double d = cut_dist_labeled(fg, c);
            decided[rep] = d <= radius + policy().abs_tol ? 1 : 0;
        }
        if (decided[rep] == 1) {
            mass.add(dist.probs[g]);
            ++cnt;
        }
    }
    if (count) *count = cnt;
    return mass.value();
}

} // namespace gldp
