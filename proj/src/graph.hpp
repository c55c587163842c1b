#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "util.hpp"

namespace gldp {

// Labeled simple graph on [n]: symmetric boolean adjacency, no loops.
class SimpleGraph {
public:
    SimpleGraph() : n_(0) {}
    explicit SimpleGraph(int n);

    int n() const { return n_; }
    bool edge(int i, int j) const;
    void set_edge(int i, int j, bool present = true);
    int edge_count() const;

    // Lexicographic pair-index bitmask over pairs (i, j), i < j.  Only defined
    // for n <= 8 (up to 28 pairs).
    std::uint32_t edge_mask() const;
    static SimpleGraph from_edge_mask(int n, std::uint32_t mask);

    bool operator==(const SimpleGraph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

private:
    int n_;
    std::vector<std::uint8_t> adj_; // row-major n*n, 0/1
};

// Edge-weighted complete graph on [n], weights in [0,1], no loops.
class WeightedGraph {
public:
    WeightedGraph() {}
    explicit WeightedGraph(int n) : w_(static_cast<std::size_t>(n)) {}
    WeightedGraph(int n, Matrix w);

    int n() const { return static_cast<int>(w_.size()); }
    double weight(int i, int j) const { return w_(i, j); }
    void set_weight(int i, int j, double v);
    const Matrix& weights() const { return w_; }

private:
    Matrix w_;
};

// Edge-list text format: first line n, then one "u v" line per edge, 0-indexed.
SimpleGraph parse_edge_list(const std::string& text);
std::string format_edge_list(const SimpleGraph& g);

// Lexicographic pair index of {i, j} within [n], i < j.
inline int pair_index(int n, int i, int j) {
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}
inline int pair_count(int n) { return n * (n - 1) / 2; }

// All permutations of [n]; cached per n (n <= 8).
const std::vector<std::vector<int>>& all_permutations(int n);

// Canonical form of a labeled graph: minimum edge mask over all vertex
// relabelings.  Brute force, n <= 8.
std::uint32_t canonical_mask(int n, std::uint32_t mask);

// Cached canonical-form table for all 2^C(n,2) graphs on [n]; n <= 6.
const std::vector<std::uint32_t>& canonical_table(int n);

// One representative per isomorphism class of graphs on exactly n vertices.
std::vector<std::uint32_t> iso_class_reps(int n);

bool isomorphic(const SimpleGraph& a, const SimpleGraph& b);

// Some small named graphs used throughout the tests and the harness.
SimpleGraph complete_graph(int n);
SimpleGraph empty_graph(int n);
SimpleGraph path_graph(int n);
SimpleGraph cycle_graph(int n);

} // namespace gldp
