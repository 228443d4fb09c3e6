#include "superfid/samplers.hpp"

#include <cmath>
#include <string>

#include <boost/math/constants/constants.hpp>

namespace superfid {

namespace {

void require_dim(int n, const char* what) {
    if (n < 2) throw InvalidDimension(std::string(what) + ": N must be at least 2");
}

}  // namespace

DensityMatrix sample_hs(int n, RngStream& rng) {
    require_dim(n, "sample_hs");
    const ComplexMatrix g = ginibre(n, rng);
    ComplexMatrix w = g * g.adjoint();
    w /= w.trace().real();
    return DensityMatrix::from_positive(std::move(w));
}

DensityMatrix sample_bures(int n, RngStream& rng) {
    require_dim(n, "sample_bures");
    const UnitaryMatrix u = haar_unitary(n, rng);
    const ComplexMatrix g = ginibre(n, rng);
    const ComplexMatrix a = (ComplexMatrix::Identity(n, n) + u.matrix()) * g;
    ComplexMatrix w = a * a.adjoint();
    w /= w.trace().real();
    return DensityMatrix::from_positive(std::move(w));
}

double invert_cdf_g2(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("invert_cdf_g2: u outside [0, 1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    double mid = 0.5;
    for (int it = 0; it < 80; ++it) {
        mid = 0.5 * (lo + hi);
        const double c = cdf_g2(mid);
        if (std::abs(c - u) <= 1e-12) return mid;
        if (c < u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

DensityMatrix sample_g_qubit(RngStream& rng) {
    const double t = invert_cdf_g2(rng.uniform());
    const EigenvalueVector eigs = EigenvalueVector::sorted({t, 1.0 - t});
    return compose_state(eigs, haar_unitary(2, rng));
}

double log_sup_density_ratio_unnormalized(int n) {
    require_dim(n, "sup_density_ratio_unnormalized");
    const double dn = n;
    return -0.5 * dn * std::log(dn) + 0.5 * dn * (dn - 1.0) * std::log(2.0 / dn) -
           0.5 * std::log(1.0 - 1.0 / dn);
}

double sup_density_ratio_unnormalized(int n) {
    return std::exp(log_sup_density_ratio_unnormalized(n));
}

double log_rejection_constant_c(int n) {
    require_dim(n, "rejection_constant_c");
    const double dn = n;
    const double n2 = dn * dn;
    double v = 0.5 * std::log((n2 - dn) / (n2 + 1.0)) + std::lgamma(n2) +
               0.5 * dn * std::log(boost::math::constants::pi<double>());
    for (int i = 1; i <= n; ++i) v -= std::lgamma(static_cast<double>(i));
    v -= 0.5 * dn * (dn - 1.0) * std::log(2.0);
    v -= std::lgamma(0.5 * n2);
    v -= 0.5 * n2 * std::log(dn);
    return v;
}

double rejection_constant_c(int n) { return std::exp(log_rejection_constant_c(n)); }

RejectionReport& RejectionReport::merge(const RejectionReport& other) {
    proposed += other.proposed;
    accepted += other.accepted;
    if (bound_constant == 0.0) bound_constant = other.bound_constant;
    if (envelope_sup == 0.0) envelope_sup = other.envelope_sup;
    return *this;
}

std::uint64_t default_proposal_budget(int n) {
    if (n <= 4) return kDefaultProposalBudget;
    throw InvalidDimension("sample_g_rejection: N > 4 needs an explicit proposal budget");
}

RejectionDraw sample_g_rejection(int n, RngStream& rng,
                                 std::optional<std::uint64_t> max_proposals) {
    if (n < 3) throw InvalidDimension("sample_g_rejection: N must be at least 3 (use sample_g_qubit)");
    const std::uint64_t budget = max_proposals ? *max_proposals : default_proposal_budget(n);
    if (budget < 1) throw DomainError("sample_g_rejection: max_proposals must be at least 1");

    const EnvelopeAudit& envelope = verified_envelope(n);
    const double log_sup = std::log(envelope.bound);

    RejectionReport report;
    report.bound_constant = rejection_constant_c(n);
    report.envelope_sup = envelope.bound;
    while (report.proposed < budget) {
        DensityMatrix x = sample_bures(n, rng);
        const EigenvalueVector lam = spectrum(x);
        const double u = rng.uniform();
        ++report.proposed;
        // Near-pure proposals have zero Bures density; their ratio is 0 as well.
        double log_ratio;
        try {
            log_ratio = log_density_ratio_g_bures(lam.values());
        } catch (const Singularity&) {
            continue;
        }
        if (std::log(u) <= log_ratio - log_sup) {
            ++report.accepted;
            return {std::move(x), report};
        }
    }
    throw BudgetExhausted("sample_g_rejection: proposal budget exhausted", report);
}

DensityMatrix sample_state(MeasureKind measure, int n, RngStream& rng, RejectionReport* report,
                           std::optional<std::uint64_t> max_proposals) {
    switch (measure) {
        case MeasureKind::HilbertSchmidt: return sample_hs(n, rng);
        case MeasureKind::Bures: return sample_bures(n, rng);
        case MeasureKind::SuperfidelityG:
            if (n == 2) return sample_g_qubit(rng);
            {
                try {
                    RejectionDraw draw = sample_g_rejection(n, rng, max_proposals);
                    if (report) report->merge(draw.report);
                    return std::move(draw.state);
                } catch (const BudgetExhausted& e) {
                    if (report) report->merge(e.report());
                    throw;
                }
            }
    }
    throw DomainError("sample_state: unknown measure");
}

}  // namespace superfid
