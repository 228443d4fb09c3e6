#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "superfid/core.hpp"
#include "superfid/densities.hpp"

namespace superfid {

/// rho = G G^dagger / tr(G G^dagger) with G Ginibre.
DensityMatrix sample_hs(int n, RngStream& rng);

/// rho proportional to (1 + U) G G^dagger (1 + U)^dagger, U Haar, G Ginibre.
DensityMatrix sample_bures(int n, RngStream& rng);

/// Inverse of cdf_g2 by bisection: stops once |cdf_g2(t) - u| <= 1e-12 or after 80 halvings.
double invert_cdf_g2(double u);

/// Exact qubit sampler for the G measure: inverse-CDF eigenvalue, Haar rotation.
DensityMatrix sample_g_qubit(RngStream& rng);

/// Supremum over the simplex of the unnormalized G/Bures density ratio, taken
/// at the maximally mixed point: N^{-N/2} (2/N)^{N(N-1)/2} / sqrt(1 - 1/N).
double sup_density_ratio_unnormalized(int n);
double log_sup_density_ratio_unnormalized(int n);

struct EnvelopeAudit {
    int dim = 0;
    double bound = 0.0;         ///< closed-form supremum
    double max_observed = 0.0;  ///< largest ratio found by search + polish
    std::uint64_t probes = 0;
    std::vector<double> argmax;
    bool verified = false;      ///< max_observed <= bound * (1 + 1e-9)
};

/// Randomized simplex search (uniform, boundary-heavy and center-heavy
/// Dirichlet probes) followed by hill-climbing from the best probes.
EnvelopeAudit audit_density_ratio_envelope(int n, std::uint64_t probes = 100000,
                                           std::uint64_t seed = 0x5eedULL);

/// Cached audit for dimension n (run once per process); throws
/// EnvelopeAuditFailure if the closed-form supremum was exceeded.
const EnvelopeAudit& verified_envelope(int n);

/// Rejection constant c of the G-vs-Bures envelope built from the Jensen
/// bound on C_N^G, evaluated in log space. Reported for diagnostics; the
/// sampler itself uses unnormalized densities.
double rejection_constant_c(int n);
double log_rejection_constant_c(int n);

struct RejectionReport {
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;
    double bound_constant = 0.0;  ///< c, for comparison with the empirical rate
    double envelope_sup = 0.0;    ///< supremum of the unnormalized ratio actually used

    double empirical_rate() const noexcept {
        return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
    }
    RejectionReport& merge(const RejectionReport& other);
};

class BudgetExhausted : public Error {
public:
    BudgetExhausted(const std::string& what, RejectionReport report)
        : Error(what), report_(report) {}
    const RejectionReport& report() const noexcept { return report_; }

private:
    RejectionReport report_;
};

inline constexpr std::uint64_t kDefaultProposalBudget = 10000;

/// Proposal budget used when none is given: kDefaultProposalBudget for N <= 4.
/// Larger N has no default (throws InvalidDimension) because the acceptance
/// rate decays quickly with N.
std::uint64_t default_proposal_budget(int n);

struct RejectionDraw {
    DensityMatrix state;
    RejectionReport report;
};

/// Exact G-measure sampler for N >= 3: propose X ~ Bures and accept when
/// u <= ratio(lambda(X)) / sup ratio. Throws BudgetExhausted carrying the
/// report if max_proposals proposals are all rejected.
RejectionDraw sample_g_rejection(int n, RngStream& rng,
                                 std::optional<std::uint64_t> max_proposals = std::nullopt);

/// One state from the requested measure. G routes to the qubit sampler for
/// N = 2 and to rejection otherwise; `report` accumulates rejection counts.
DensityMatrix sample_state(MeasureKind measure, int n, RngStream& rng,
                           RejectionReport* report = nullptr,
                           std::optional<std::uint64_t> max_proposals = std::nullopt);

}  // namespace superfid
