#pragma once

#include <utility>
#include <vector>

#include "graph.hpp"
#include "util.hpp"

namespace gldp {

// Finite piecewise-constant symmetric kernel on [0,1]^2: part measures plus a
// symmetric value matrix.  Parts are laid out as consecutive intervals in the
// given order; a dividing point belongs to the interval on its right.
class StepGraphon {
public:
    StepGraphon(std::vector<double> measures, Matrix values);

    std::size_t parts() const { return measures_.size(); }
    const std::vector<double>& measures() const { return measures_; }
    const Matrix& values() const { return values_; }
    double measure(std::size_t i) const { return measures_[i]; }
    double value(std::size_t i, std::size_t j) const { return values_(i, j); }

    // Interval boundaries 0 = b_0 <= b_1 <= ... <= b_m = 1.
    std::vector<double> boundaries() const;

    // Drops zero-measure parts.
    StepGraphon drop_null_parts() const;

    // Drops zero-measure parts, then merges parts with identical value rows
    // (within tol) until a fixpoint.  Normal form for weak-isomorphism tests.
    StepGraphon canonical(double tol = -1.0) const;

    // Parts permuted by perm: part i of the result is part perm[i] of *this.
    StepGraphon permuted(const std::vector<int>& perm) const;

    bool zero_one_valued(double tol = 1e-9) const;

    static StepGraphon constant(double p);

private:
    std::vector<double> measures_;
    Matrix values_;
};

// Closed subintervals of [0,1], pairwise disjoint, nonzero length.
struct IntervalList {
    std::vector<std::pair<double, double>> intervals;

    IntervalList() = default;
    explicit IntervalList(std::vector<std::pair<double, double>> iv);
};

// {0,1}-valued embedding of a labeled graph: n equal parts, adjacency values.
StepGraphon graph_to_graphon(const SimpleGraph& g);

// n equal parts with the weight matrix as values (diagonal 0: no loops).
StepGraphon weighted_to_graphon(const WeightedGraph& h);

// Same values with measures replaced by mu; zero-measure parts dropped.
StepGraphon reweight(const StepGraphon& w, const std::vector<double>& mu);

// Result of restricting to [0,s]^2 and rescaling, plus the canonical coupling
// between the parts of the input and the parts of the result (the maximal
// diagonal-mass coupling of the two measure vectors).
struct StretchResult {
    StepGraphon graphon;
    // plan[i][j]: mass coupling input part i with output part j.
    std::vector<std::vector<double>> plan;
};
StretchResult stretch(const StepGraphon& u, double s);

// Two step graphons rewritten over one shared interval grid.
struct Refinement {
    std::vector<double> measures;
    std::vector<int> left_part;  // refined cell -> part of the left input
    std::vector<int> right_part; // refined cell -> part of the right input
};
Refinement common_refinement(const StepGraphon& u, const StepGraphon& v);

std::pair<StepGraphon, StepGraphon> common_refinement_pair(const StepGraphon& u,
                                                           const StepGraphon& v);

// Step graphon whose i-th block of mass masses[i] carries w restricted to
// targets[i], rescaled.  Specializes to the two-interval mass-localization
// construction with masses (1/2, 1/2).
StepGraphon localize(const StepGraphon& w, const IntervalList& targets,
                     const std::vector<double>& masses);

// Uniform blow-up: every vertex of f becomes a class of m vertices, classes
// adjacent exactly as in f, no intra-class edges.
SimpleGraph blowup(const SimpleGraph& f, int m);

} // namespace gldp
