#include "graph.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "errors.hpp"
#include "policy.hpp"

namespace gldp {

SimpleGraph::SimpleGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 0) throw config_error("SimpleGraph: vertex count must be >= 0");
}

bool SimpleGraph::edge(int i, int j) const {
    if (i == j) return false;
    return adj_[static_cast<std::size_t>(i) * n_ + j] != 0;
}

void SimpleGraph::set_edge(int i, int j, bool present) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw config_error("SimpleGraph: vertex out of range");
    if (i == j) throw config_error("SimpleGraph: loops are not allowed");
    adj_[static_cast<std::size_t>(i) * n_ + j] = present ? 1 : 0;
    adj_[static_cast<std::size_t>(j) * n_ + i] = present ? 1 : 0;
}

int SimpleGraph::edge_count() const {
    int c = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (edge(i, j)) ++c;
    return c;
}

std::uint32_t SimpleGraph::edge_mask() const {
    if (n_ > 8) throw guard_error("edge_mask: defined only for n <= 8");
    std::uint32_t m = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (edge(i, j)) m |= 1u << pair_index(n_, i, j);
    return m;
}

SimpleGraph SimpleGraph::from_edge_mask(int n, std::uint32_t mask) {
    SimpleGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (mask & (1u << pair_index(n, i, j))) g.set_edge(i, j);
    return g;
}

WeightedGraph::WeightedGraph(int n, Matrix w) : w_(std::move(w)) {
    if (static_cast<int>(w_.size()) != n) throw config_error("WeightedGraph: matrix size mismatch");
    if (!w_.symmetric(policy().sym_tol)) throw config_error("WeightedGraph: weights must be symmetric");
    for (int i = 0; i < n; ++i) {
        if (w_(i, i) != 0.0) throw config_error("WeightedGraph: loops are not allowed (diagonal must be 0)");
        for (int j = 0; j < n; ++j)
            if (!(w_(i, j) >= 0.0 && w_(i, j) <= 1.0))
                throw config_error("WeightedGraph: weights must lie in [0,1]");
    }
}

void WeightedGraph::set_weight(int i, int j, double v) {
    if (i == j) throw config_error("WeightedGraph: loops are not allowed");
    if (!(v >= 0.0 && v <= 1.0)) throw config_error("WeightedGraph: weight must lie in [0,1]");
    w_(i, j) = v;
    w_(j, i) = v;
}

SimpleGraph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    long long n = -1;
    if (!(in >> n) || n < 1) throw config_error("edge list: first token must be the vertex count n >= 1");
    SimpleGraph g(static_cast<int>(n));
    long long u, v;
    while (in >> u) {
        if (!(in >> v)) throw config_error("edge list: dangling endpoint");
        if (u < 0 || v < 0 || u >= n || v >= n) throw config_error("edge list: vertex index out of range");
        if (u == v) throw config_error("edge list: loops are not allowed");
        g.set_edge(static_cast<int>(u), static_cast<int>(v));
    }
    return g;
}

std::string format_edge_list(const SimpleGraph& g) {
    std::ostringstream out;
    out << g.n() << "\n";
    for (int i = 0; i < g.n(); ++i)
        for (int j = i + 1; j < g.n(); ++j)
            if (g.edge(i, j)) out << i << " " << j << "\n";
    return out.str();
}

const std::vector<std::vector<int>>& all_permutations(int n) {
    static std::map<int, std::vector<std::vector<int>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n > 8) throw guard_error("all_permutations: n <= 8 required");
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return cache.emplace(n, std::move(out)).first->second;
}

namespace {

std::uint32_t permute_mask(int n, std::uint32_t mask, const std::vector<int>& perm) {
    std::uint32_t out = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!(mask & (1u << pair_index(n, i, j)))) continue;
            int a = perm[i], b = perm[j];
            if (a > b) std::swap(a, b);
            out |= 1u << pair_index(n, a, b);
        }
    return out;
}

} // namespace

std::uint32_t canonical_mask(int n, std::uint32_t mask) {
    std::uint32_t best = mask;
    for (const auto& perm : all_permutations(n)) best = std::min(best, permute_mask(n, mask, perm));
    return best;
}

const std::vector<std::uint32_t>& canonical_table(int n) {
    static std::map<int, std::vector<std::uint32_t>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n > 6) throw guard_error("canonical_table: n <= 6 required");
    std::uint32_t total = 1u << pair_count(n);
    std::vector<std::uint32_t> table(total);
    for (std::uint32_t m = 0; m < total; ++m) table[m] = canonical_mask(n, m);
    return cache.emplace(n, std::move(table)).first->second;
}

std::vector<std::uint32_t> iso_class_reps(int n) {
    if (n > 6) throw guard_error("iso_class_reps: n <= 6 required");
    const auto& table = canonical_table(n);
    std::vector<std::uint32_t> reps;
    for (std::uint32_t m = 0; m < table.size(); ++m)
        if (table[m] == m) reps.push_back(m);
    return reps;
}

bool isomorphic(const SimpleGraph& a, const SimpleGraph& b) {
    if (a.n() != b.n()) return false;
    return canonical_mask(a.n(), a.edge_mask()) == canonical_mask(b.n(), b.edge_mask());
}

SimpleGraph complete_graph(int n) {
    SimpleGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.set_edge(i, j);
    return g;
}

SimpleGraph empty_graph(int n) { return SimpleGraph(n); }

SimpleGraph path_graph(int n) {
    SimpleGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.set_edge(i, i + 1);
    return g;
}

SimpleGraph cycle_graph(int n) {
    SimpleGraph g = path_graph(n);
    if (n >= 3) g.set_edge(n - 1, 0);
    return g;
}

} // namespace gldp
