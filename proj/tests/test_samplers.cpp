#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "superfid/constants.hpp"
#include "superfid/quadrature.hpp"
#include "superfid/samplers.hpp"
#include "superfid/statlab.hpp"
#include "test_util.hpp"

using namespace superfid;

namespace {

std::vector<double> lambda_max(MeasureKind m, int count, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<double> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(spectrum(sample_state(m, 2, rng))[0]);
    return out;
}

// P(lambda_max <= t) for t in [1/2, 1] under a symmetric qubit eigenvalue law with cdf F.
double reflected(double (*cdf)(double), double t) { return 2.0 * cdf(t) - 1.0; }

// P(lambda_max <= t), t in [1/2, 1], for the qubit Bures law: 1 - 2 int_0^{1-t} of the
// normalized marginal (2/pi) b(s, 1-s), integrated numerically from the exact endpoint 0.
double bures_lambda_max_cdf(double t) {
    if (t >= 1.0) return 1.0;
    const double tail = endpoint_singular_quadrature(
                            [](double s) {
                                const double l[2] = {s, 1.0 - s};
                                return density_bures_unnormalized(l) * 2.0 / std::numbers::pi;
                            },
                            0.0, 1.0 - t, 1e-10)
                            .value;
    return 1.0 - 2.0 * tail;
}

}  // namespace

TEST(HilbertSchmidtSampler, PurityMoments) {
    RngStream rng(1, 0);
    std::vector<double> p;
    for (int i = 0; i < 200000; ++i) p.push_back(purity(sample_hs(2, rng)));
    const McEstimate m = mc_mean(p);
    EXPECT_LE(std::abs(m.mean - 0.8), 3.0 * m.std_error);
    const VarianceEstimate v = mc_variance(p);
    EXPECT_LE(std::abs(v.variance - 18.0 / 1050.0), 3.0 * v.std_error);
}

TEST(HilbertSchmidtSampler, QubitEigenvalueHistogram) {
    RngStream rng(2, 0);
    std::vector<double> l;
    for (int i = 0; i < 50000; ++i) l.push_back(spectrum(sample_hs(2, rng))[0]);
    const GofResult r = chi_square_gof(
        l, [](double t) { return (2.0 * t - 1.0) * (2.0 * t - 1.0); }, 25, 0.5, 1.0);
    EXPECT_GT(r.p_value, 0.01);
}

TEST(BuresSampler, QubitKsAgainstQuadratureCdf) {
    const std::vector<double> l = lambda_max(MeasureKind::Bures, 20000, 3);
    const GofResult r = ks_test(l, bures_lambda_max_cdf, 0.5, 1.0);
    EXPECT_GT(r.p_value, 0.01);
}

TEST(BuresSampler, QubitMatchesGSampler) {
    const auto a = lambda_max(MeasureKind::Bures, 20000, 4);
    const auto b = lambda_max(MeasureKind::SuperfidelityG, 20000, 5);
    EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
}

TEST(Samplers, OutputsAreValidStates) {
    RngStream rng(6, 0);
    for (int n = 2; n <= 4; ++n) {
        for (MeasureKind m : {MeasureKind::HilbertSchmidt, MeasureKind::Bures, MeasureKind::SuperfidelityG}) {
            const int count = m == MeasureKind::SuperfidelityG && n > 2 ? 1000 : 10000;
            for (int i = 0; i < count; ++i) {
                ASSERT_TRUE(is_valid_density(sample_state(m, n, rng).matrix()));
            }
        }
    }
}

TEST(Samplers, UnitaryInvarianceOfOverlap) {
    for (MeasureKind m : {MeasureKind::HilbertSchmidt, MeasureKind::Bures, MeasureKind::SuperfidelityG}) {
        RngStream rng(7, 0);
        Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(3);
        e0[0] = 1.0;
        const Eigen::VectorXcd rotated = haar_unitary(3, rng).matrix() * e0;
        std::vector<double> a;
        std::vector<double> b;
        for (int i = 0; i < 3000; ++i) {
            a.push_back(std::real(e0.dot(sample_state(m, 3, rng).matrix() * e0)));
            b.push_back(std::real(rotated.dot(sample_state(m, 3, rng).matrix() * rotated)));
        }
        EXPECT_GT(ks_two_sample(a, b).p_value, 0.01) << measure_tag(m);
    }
}

TEST(InverseCdf, KnownPoints) {
    EXPECT_EQ(invert_cdf_g2(0.0), 0.0);
    EXPECT_EQ(invert_cdf_g2(1.0), 1.0);
    EXPECT_NEAR(invert_cdf_g2(0.5), 0.5, 1e-12);
    EXPECT_NEAR(invert_cdf_g2(0.47116555718878135), 0.25, 1e-10);
    EXPECT_THROW(invert_cdf_g2(-0.1), DomainError);
}

TEST(InverseCdf, RoundTrip) {
    for (double u = 0.001; u < 1.0; u += 0.0173) {
        ASSERT_NEAR(cdf_g2(invert_cdf_g2(u)), u, 1e-12);
    }
}

TEST(QubitGSampler, KsAgainstClosedFormCdf) {
    const auto l = lambda_max(MeasureKind::SuperfidelityG, 50000, 8);
    EXPECT_GT(ks_test(l, [](double t) { return reflected(cdf_g2, t); }, 0.5, 1.0).p_value, 0.01);
}

TEST(QubitGSampler, MeanPurityExceedsHilbertSchmidt) {
    RngStream rng(9, 0);
    std::vector<double> p;
    for (int i = 0; i < 200000; ++i) p.push_back(purity(sample_g_qubit(rng)));
    const McEstimate m = mc_mean(p);
    const double oracle =
        2.0 * endpoint_singular_quadrature(
                  [](double t) { return pdf_g2_marginal(t) * (t * t + (1 - t) * (1 - t)); }, 0.0, 0.5, 1e-10)
                  .value;
    EXPECT_NEAR(oracle, 0.875, 1e-9);
    EXPECT_LE(std::abs(m.mean - oracle), 3.0 * m.std_error);
    EXPECT_GT(m.mean, 0.8);
}

TEST(QubitGSampler, BlochDirectionIsIsotropic) {
    RngStream rng(10, 0);
    std::vector<double> x, y, z;
    for (int i = 0; i < 20000; ++i) {
        const ComplexMatrix r = sample_g_qubit(rng).matrix();
        x.push_back(2.0 * r(0, 1).real());
        y.push_back(-2.0 * r(0, 1).imag());
        z.push_back((r(0, 0) - r(1, 1)).real());
    }
    for (const auto* v : {&x, &y, &z}) {
        const McEstimate m = mc_mean(*v);
        EXPECT_LE(std::abs(m.mean), 3.0 * m.std_error);
    }
}

TEST(Envelope, ClosedFormSupremum) {
    EXPECT_NEAR(sup_density_ratio_unnormalized(2), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(sup_density_ratio_unnormalized(3), 0.069837706783856546, 1e-15);
    for (int n = 2; n <= 6; ++n) {
        std::vector<double> center(n, 1.0 / n);
        EXPECT_NEAR(density_ratio_g_bures(center), sup_density_ratio_unnormalized(n),
                    1e-12 * sup_density_ratio_unnormalized(n));
    }
}

TEST(Envelope, AuditFindsNoLargerRatio) {
    for (int n = 2; n <= 4; ++n) {
        const EnvelopeAudit a = audit_density_ratio_envelope(n, 100000);
        EXPECT_TRUE(a.verified) << "N=" << n;
        EXPECT_LE(a.max_observed, a.bound + 1e-9);
        EXPECT_GT(a.max_observed, 0.99 * a.bound);  // the polish reaches the maximum
    }
}

TEST(Envelope, IndependentGridSearchAtN3) {
    double best = 0.0;
    const int m = 600;
    for (int i = 1; i < m; ++i) {
        for (int j = 1; i + j < m; ++j) {
            const double l[3] = {static_cast<double>(i) / m, static_cast<double>(j) / m,
                                 static_cast<double>(m - i - j) / m};
            best = std::max(best, density_ratio_g_bures(l));
        }
    }
    EXPECT_LE(best, sup_density_ratio_unnormalized(3) + 1e-12);
    EXPECT_NEAR(best, sup_density_ratio_unnormalized(3), 1e-12);  // 600 is divisible by 3
}

TEST(RejectionConstant, Values) {
    EXPECT_NEAR(rejection_constant_c(3), 6.661, 1e-3);
    const double cross = c_g_jensen_bound(3).value / c_bures_quadrature(3).value * sup_density_ratio_unnormalized(3);
    EXPECT_NEAR(rejection_constant_c(3) / cross, 1.0, 1e-6);
    for (int n = 3; n < 8; ++n) EXPECT_GT(rejection_constant_c(n + 1), rejection_constant_c(n));
    EXPECT_GT(rejection_constant_c(2), 0.0);
    EXPECT_TRUE(std::isfinite(log_rejection_constant_c(40)));
}

TEST(RejectionSampler, Preconditions) {
    RngStream rng(11, 0);
    EXPECT_THROW(sample_g_rejection(2, rng), InvalidDimension);
    EXPECT_THROW(sample_g_rejection(3, rng, 0), DomainError);
    EXPECT_THROW(sample_g_rejection(5, rng), InvalidDimension);
    EXPECT_EQ(default_proposal_budget(4), kDefaultProposalBudget);
}

TEST(RejectionSampler, BudgetExhaustionCarriesReport) {
    RngStream rng(12, 0);
    int exhausted = 0;
    for (int i = 0; i < 50; ++i) {
        try {
            sample_g_rejection(3, rng, 1);
        } catch (const BudgetExhausted& e) {
            ++exhausted;
            EXPECT_EQ(e.report().proposed, 1u);
            EXPECT_EQ(e.report().accepted, 0u);
        }
    }
    EXPECT_GT(exhausted, 20);
}

TEST(RejectionSampler, QutritChiSquare) {
    RngStream rng(13, 0);
    std::vector<EigenvalueVector> s;
    RejectionReport total;
    for (int i = 0; i < 20000; ++i) {
        RejectionDraw d = sample_g_rejection(3, rng);
        s.push_back(spectrum(d.state));
        total.merge(d.report);
    }
    const double c = c_g_exact(3).value;
    const auto p = qutrit_chamber_probabilities(
        [c](std::span<const double> l) { return c * density_g_unnormalized(l); }, 8);
    EXPECT_GT(chi_square_qutrit(s, p, 8).p_value, 1e-3);
    EXPECT_EQ(total.accepted, 20000u);
    EXPECT_GE(total.empirical_rate(), 1.0 / rejection_constant_c(3));
}

TEST(RejectionSampler, FourLevelPurityMatchesWeightedOracle) {
    // Importance-weighted HS purities give an independent estimate of E_G[tr rho^2] at N = 4.
    RngStream hs(14, 0);
    double wsum = 0.0, wpsum = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double p = purity(sample_hs(4, hs));
        const double w = 1.0 / std::sqrt(1.0 - p);
        wsum += w;
        wpsum += w * p;
    }
    const double oracle = wpsum / wsum;
    RngStream rng(15, 0);
    std::vector<double> p;
    for (int i = 0; i < 5000; ++i) p.push_back(purity(sample_g_rejection(4, rng).state));
    const McEstimate m = mc_mean(p);
    EXPECT_NEAR(m.mean, oracle, 4.0 * m.std_error + 2e-3);
}

TEST(RejectionSampler, AcceptanceRateStableAcrossSeeds) {
    auto rate = [](std::uint64_t seed) {
        RngStream rng(seed, 0);
        RejectionReport r;
        while (r.proposed < 20000) r.merge(sample_g_rejection(3, rng).report);
        return r;
    };
    const RejectionReport a = rate(16);
    const RejectionReport b = rate(17);
    const double pa = a.empirical_rate();
    const double pb = b.empirical_rate();
    const double se = std::sqrt(pa * (1 - pa) / a.proposed + pb * (1 - pb) / b.proposed);
    EXPECT_LE(std::abs(pa - pb), 3.0 * se);
}
