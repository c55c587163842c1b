#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "rates.hpp"
#include "rng.hpp"
#include "step_graphon.hpp"

namespace gldp {

// Machine-readable experiment output: CSV rows plus a JSON sidecar carrying
// the config echo, environment and witnesses.  Reports embed no clocks or
// machine state, so identical config + seed reproduces them byte for byte.
struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    ojson config = ojson::object();
    ojson extras = ojson::object();
    std::string metric_convention;

    std::string to_csv() const;
    ojson to_json() const;
};

// Deterministic largest-remainder rounding of n * target to integer counts
// summing to n (ties resolved toward lower indices).
std::vector<long> largest_remainder_counts(long n, const std::vector<double>& target);

// Exact multinomial probability of hitting round(n * target) under beta,
// compared per n against the discrete relative entropy; the gap must stay in
// [0, k log(n+1) / n] (method of types), asserted internally.
Report sanov_experiment(const std::vector<double>& beta, const std::vector<double>& target,
                        const std::vector<long>& schedule);

// Exact ball masses of the n-vertex sampling law around a center, with the
// bracketing columns of the quadratic-speed rate; no convergence claim.
Report speed2_experiment(const StepGraphon& w, const StepGraphon& center, double radius,
                         const std::vector<int>& schedule, const SolveOptions& rate_opts = {});

// Coupled weighted/rounded samples; counts trials whose certified distance
// lower bound exceeds alpha (no false positives by construction).
Report expeq_experiment(const StepGraphon& w, const std::vector<int>& schedule, double alpha,
                        int trials, std::uint64_t seed);

// Random aligned colored pairs; asserts the forgetting and patching maps are
// 1-Lipschitz against the colored distance.
Report lipschitz_experiment(int trials, int m, int k, std::uint64_t seed);

// Canonical-plan upper bounds for stretched graphons against 2(1/s - 1).
Report delete_stretch_experiment(int trials, const std::vector<double>& s_list,
                                 std::uint64_t seed);

// Shared generators for experiments and tests (deterministic given the rng).
StepGraphon random_step_graphon(StreamRng& rng, int parts);
ColoredStepGraphon random_colored(StreamRng& rng, int parts, int k);
Matrix random_symmetric_matrix(StreamRng& rng, int k, double lo = 0.0, double hi = 1.0);

// Homomorphism densities of the edge, the path on 3 and the triangle for an
// n-part equal-measure kernel given by its value matrix.
struct SmallDensities {
    double edge, path3, triangle;
};
SmallDensities small_densities(const Matrix& w);

// max over {K2, P3, K3} of |t(F,A) - t(F,B)| / e(F); equals the max_size = 3
// counting-lemma lower bound for equal-part kernels.
double density_lower_bound3(const Matrix& a, const Matrix& b);

} // namespace gldp
