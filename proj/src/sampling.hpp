#pragma once

#include <utility>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"
#include "step_graphon.hpp"

namespace gldp {

// n-vertex sample from a step graphon: part labels from per-vertex streams,
// Bernoulli edges from per-edge streams.
SimpleGraph sample_wrandom(const StepGraphon& w, int n, const SeedSpec& seed);

// Part labels of the vertices only (the latent assignment of sample_wrandom).
std::vector<int> sample_labels(const StepGraphon& w, int n, const SeedSpec& seed);

// Block model with fixed block sizes (consecutive-interval assignment).
SimpleGraph sample_sbm(const std::vector<int>& a, const Matrix& p, const SeedSpec& seed);

// Weighted sample: same labels as sample_wrandom, weight = kernel value.
WeightedGraph sample_weighted(const StepGraphon& w, int n, const SeedSpec& seed);

// Independent Bernoulli(w_H(i,j)) rounding from per-edge streams.
SimpleGraph round_weighted(const WeightedGraph& h, const SeedSpec& seed);

// Coupled block-model pair sharing edge coins on the matched vertex sets.
struct SbmCouple {
    SimpleGraph g; // ~ G(a, p)
    SimpleGraph h; // ~ G(b, p)
    // matched[t] = (vertex of g, vertex of h) identified by the coupling.
    std::vector<std::pair<int, int>> matched;

    // 2(1/s - 1) deletion bounds for both sides, summed: a certified upper
    // bound on the cut distance between the two sampled graphons.
    double certified_upper() const;
};
SbmCouple couple_sbm(const std::vector<int>& a, const std::vector<int>& b, const Matrix& p,
                     double eps, const SeedSpec& seed);

// Weighted sample plus its edge rounding under disjoint stream namespaces; the
// marginals are the weighted and the rounded sampling laws.
std::pair<WeightedGraph, SimpleGraph> couple_weighted_rounded(const StepGraphon& w, int n,
                                                              const SeedSpec& seed);

} // namespace gldp
