#ifndef RDTODA_VERIFY_HPP
#define RDTODA_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace rdtoda {

struct CheckResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The ten acceptance checks. Randomized ones take the audit seed; the rest
/// are deterministic fixtures.
CheckResult check_hyperbolic_accuracy();
CheckResult check_flat_recovery();
CheckResult check_pole_weight_roundtrip();
CheckResult check_special_weight_roundtrip();
CheckResult check_classification_fixtures();
CheckResult check_correction_vector_enumeration();
CheckResult check_fiber_inequalities(std::uint64_t seed);
CheckResult check_trace_subharmonicity();
CheckResult check_zero_counting(std::uint64_t seed);
CheckResult check_domain_exhaustion();

/// Named suites for the CLI: fibers, parabolic, oracle, roundtrip, zeros, all.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed);

} // namespace rdtoda

#endif
