#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colored.hpp"
#include "step_graphon.hpp"
#include "transport.hpp"

namespace gldp {

// Binary relative entropy of r against p, with the conventions 0 log 0 = 0 and
// h_p = chi_{r=p} for p in {0, 1}.  Always in [0, +inf], never NaN.
double rel_entropy(double r, double p);

// Speed-n^2 rate function of the homogeneous model: (1/2) integral of
// h_p(U(x,y)) over the square, as a finite sum over part pairs.
double I_p(const StepGraphon& u, double p);

// Colored rate function: cells pay relative entropy against the entry of p
// selected by their part colors.
double I_k_p(const ColoredStepGraphon& x, const Matrix& p);

// Forgets the coloring.
StepGraphon gamma_forget(const ColoredStepGraphon& x);

// Keeps the kernel on (A_i x A_j) u (A_j x A_i) and overwrites everything else
// with p(i, j).  Indices are 0-based.
StepGraphon gamma_patch(const ColoredStepGraphon& x, int i, int j, const Matrix& p);

enum class SolveMode { Auto, Exact, Heuristic };

struct SolveOptions {
    SolveMode mode = SolveMode::Auto;
    int restarts = 16;
    int iters = 200;
    std::uint64_t seed = 0x5eedULL;
    int grid = 32;       // simplex grid denominator for R
    int refine_budget = 200;
};

// Optimizer output: the value, the witness that reproduces it, and how it was
// obtained.  gap is a certified optimality gap (0 in exact mode).
struct RateResult {
    double value = 0.0;
    std::string method = "exact";
    double gap = 0.0;
    bool feasible = true;
    TransportPlan plan;        // witness for J (and the inner plan for R)
    std::vector<double> alpha; // witness for R
    std::vector<int> sigma;    // witness for K_W
};

// J_{alpha,p}(U): minimum over transport plans C (rows alpha/|alpha|_1, cols
// the part measures of U) of (1/2) sum C_ac C_bd h_{p_ab}(u_cd).  Plans whose
// support touches an infinite-entropy cell pair are infeasible.
RateResult j_alpha_p(const StepGraphon& u, const std::vector<double>& alpha, const Matrix& p,
                     const SolveOptions& opts = {});

// R_p(U): infimum of J_{alpha,p}(U) over the k-simplex, via a coarse grid plus
// local refinement around the best cells.
RateResult r_p(const StepGraphon& u, const Matrix& p, const SolveOptions& opts = {});

// Speed-n rate function restricted to step graphons: min over value-matching
// part permutations sigma of sum_i beta'_{sigma(i)} log(beta'_{sigma(i)} /
// beta_i); +inf when no permutation matches.  Inputs are canonicalized first.
RateResult k_w_step(const StepGraphon& w, const StepGraphon& u);

// Relative entropy of empirical counts/n against beta; +inf on support
// violations.
double discrete_rel_entropy(const std::vector<long>& counts, long n,
                            const std::vector<double>& beta);

// Finite-K criterion for membership in RN(W).
bool rn_member(const StepGraphon& w, const StepGraphon& u);

// Bounded induced-subgraph consistency: every F on <= max_size vertices with
// zero induced density in w must have zero induced density in u.
bool forb_consistent(const StepGraphon& w, const StepGraphon& u, int max_size);

} // namespace gldp
