#pragma once

#include <vector>

#include "graph.hpp"
#include "step_graphon.hpp"

namespace gldp {

// Homomorphism density t(F, W): sum over maps V(F) -> parts of the product of
// part measures and edge values.  Exact finite sum.
double hom_density(const SimpleGraph& f, const StepGraphon& w);

// Induced density t_ind(F, W): edges contribute the value, non-edges one minus
// the value.  Equals the probability that the |V(F)|-vertex sample is F.
double induced_density(const SimpleGraph& f, const StepGraphon& w);

// Verifies t(F, W) = sum of t_ind(F', W) over supergraphs F' on the same
// vertex set, to 1e-10.  |V(F)| <= 4.
bool hom_density_relation_check(const SimpleGraph& f, const StepGraphon& w);

// Probability of every labeled graph on [n], indexed by edge-pair bitmask in
// lexicographic pair order.
struct GraphDistribution {
    int n = 0;
    std::vector<double> probs;

    double total() const;
    double prob(std::uint32_t mask) const { return probs[mask]; }
};

// Law of the n-vertex sample from w; n <= 6.
GraphDistribution exact_distribution(const StepGraphon& w, int n);

// Law of the block model with fixed block sizes a and edge matrix p; |a|_1 <= 6.
GraphDistribution sbm_exact_distribution(const std::vector<int>& a, const Matrix& p);

// Total probability of graphs whose graphon lies within radius of center under
// the labeled cut distance.  count receives the number of labeled graphs in
// the ball when non-null.
double ball_mass(const GraphDistribution& dist, const StepGraphon& center, double radius,
                 long* count = nullptr);

// Blows a center with fewer equal parts up to n equal parts so the labeled
// metric applies; identity when the center already has n parts.
StepGraphon align_center_parts(const StepGraphon& center, int n);

} // namespace gldp
