#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace superfid {

struct CheckResult {
    std::string id;
    std::string description;
    bool passed = false;
    std::string detail;
    std::vector<std::pair<std::string, double>> metrics;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int shards = 8;
    std::optional<int> dim;  ///< restricts dimension-dependent checks where meaningful
};

// One function per quantitative claim. Sample sizes are the full ones; each
// returns its own wall time in `seconds`.
CheckResult check_qubit_fidelity_equality(const VerifyOptions& opt);
CheckResult check_fidelity_bound(const VerifyOptions& opt);
CheckResult check_metric_axioms(const VerifyOptions& opt);
CheckResult check_line_elements(const VerifyOptions& opt);
CheckResult check_normalization_quadrature(const VerifyOptions& opt);
CheckResult check_monte_carlo_identity(const VerifyOptions& opt);
CheckResult check_jensen_bound(const VerifyOptions& opt);
CheckResult check_purity_statistics(const VerifyOptions& opt);
CheckResult check_series_estimator(const VerifyOptions& opt);
CheckResult check_qubit_sampler(const VerifyOptions& opt);
CheckResult check_rejection_sampler(const VerifyOptions& opt);
CheckResult check_rejection_constant(const VerifyOptions& opt);
CheckResult check_density_grids(const VerifyOptions& opt);
/// Mean purity under G exceeds the HS mean (qubit sampler for N = 2, rejection otherwise).
CheckResult check_purity_ordering(const VerifyOptions& opt);

/// Suites: metric, density, sampler, purity, all. Unknown names throw DomainError.
std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& opt);
bool is_known_suite(std::string_view suite);

}  // namespace superfid
