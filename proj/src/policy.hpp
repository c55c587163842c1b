#pragma once

namespace gldp {

// One global knob set for every tolerance used by the library.  All checks are
// absolute unless noted.  Mutate before computing, not concurrently with it.
struct NumericPolicy {
    double abs_tol = 1e-12;      // default comparison / canonicalization tolerance
    double sym_tol = 1e-15;      // symmetry of value matrices
    double marginal_tol = 1e-10; // transport-plan marginal checks
    double match_tol = 1e-9;     // value matching in K_W permutation search
    int threads = 0;             // 0 = hardware concurrency
};

NumericPolicy& policy();

int effective_threads();

} // namespace gldp
