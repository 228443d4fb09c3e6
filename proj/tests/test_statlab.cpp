#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "superfid/constants.hpp"
#include "superfid/densities.hpp"
#include "superfid/samplers.hpp"
#include "superfid/statlab.hpp"

using namespace superfid;

namespace {

std::vector<double> uniforms(std::uint64_t seed, int n) {
    RngStream rng(seed, 0);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform();
    return v;
}

// Beta(2, 1) on [0, 1]: cdf x^2, inverse sqrt(u).
std::vector<double> beta21(std::uint64_t seed, int n) {
    std::vector<double> v = uniforms(seed, n);
    for (double& x : v) x = std::sqrt(x);
    return v;
}

}  // namespace

TEST(McMean, ConstantInput) {
    const std::vector<double> v(100, 0.8);
    const McEstimate m = mc_mean(v);
    EXPECT_NEAR(m.mean, 0.8, 1e-14);
    EXPECT_LT(m.std_error, 1e-14);
}

TEST(McMean, Alternating) {
    std::vector<double> v(10000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 2);
    const McEstimate m = mc_mean(v);
    EXPECT_DOUBLE_EQ(m.mean, 0.5);
    EXPECT_NEAR(m.std_error, 0.005, 1e-6);
    EXPECT_THROW(mc_mean(std::vector<double>{1.0}), DomainError);
}

TEST(McMean, StandardErrorHalvesWhenSamplesQuadruple) {
    const McEstimate a = mc_mean(uniforms(1, 10000));
    const McEstimate b = mc_mean(uniforms(2, 40000));
    EXPECT_NEAR(a.std_error / b.std_error, 2.0, 0.4);
}

TEST(McVariance, UniformLaw) {
    const VarianceEstimate v = mc_variance(uniforms(3, 100000));
    EXPECT_LE(std::abs(v.variance - 1.0 / 12.0), 3.0 * v.std_error);
    // exact SE^2 * n for the uniform law: mu4 - sigma^4 = 1/80 - 1/144
    EXPECT_NEAR(v.std_error * std::sqrt(100000.0), std::sqrt(1.0 / 80.0 - 1.0 / 144.0), 2e-4);
}

TEST(Kolmogorov, ReferenceValues) {
    EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
    EXPECT_NEAR(kolmogorov_survival(1.3580986), 0.05, 1e-6);
    EXPECT_NEAR(kolmogorov_survival(1.2238479), 0.10, 1e-6);
    EXPECT_NEAR(kolmogorov_survival(1.6276236), 0.01, 1e-6);
    // both branches meet continuously
    EXPECT_NEAR(kolmogorov_survival(1.18 - 1e-9), kolmogorov_survival(1.18 + 1e-9), 1e-8);
}

TEST(KsTest, Calibration) {
    int rejections = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const GofResult r = ks_test(beta21(100 + rep, 500), [](double x) { return x * x; });
        ASSERT_GE(r.p_value, 0.0);
        ASSERT_LE(r.p_value, 1.0);
        if (r.p_value < 0.05) ++rejections;
    }
    EXPECT_LE(rejections, 10);
}

TEST(KsTest, Power) {
    std::vector<double> v = beta21(7, 10000);
    for (double& x : v) x = std::min(1.0, x + 0.05);
    EXPECT_LT(ks_test(v, [](double x) { return x * x; }).p_value, 1e-6);
}

TEST(KsTest, AllEqualSamples) {
    const std::vector<double> v(200, 0.5);
    EXPECT_LT(ks_test(v, [](double x) { return x; }).p_value, 1e-10);
}

TEST(KsTest, Preconditions) {
    EXPECT_THROW(ks_test(uniforms(1, 49), [](double x) { return x; }), GofError);
    EXPECT_THROW(ks_test(uniforms(1, 100), [](double x) { return std::sin(10.0 * x); }), GofError);
}

TEST(KsTwoSample, SameAndShiftedLaws) {
    EXPECT_GT(ks_two_sample(uniforms(11, 5000), uniforms(12, 5000)).p_value, 0.01);
    std::vector<double> shifted = uniforms(13, 5000);
    for (double& x : shifted) x += 0.1;
    EXPECT_LT(ks_two_sample(uniforms(14, 5000), shifted).p_value, 1e-6);
}

TEST(ChiSquare, Calibration) {
    int passes = 0;
    const auto density = [](double x) { return 2.0 * x; };
    for (int rep = 0; rep < 100; ++rep) {
        if (chi_square_gof(beta21(300 + rep, 2000), density, 20, 0.0, 1.0).p_value > 0.01) ++passes;
    }
    EXPECT_GE(passes, 95);
}

TEST(ChiSquare, NormalizesDensity) {
    // same law, density given up to a factor 7
    const GofResult r = chi_square_gof(beta21(5, 20000), [](double x) { return 14.0 * x; }, 25, 0.0, 1.0);
    EXPECT_GT(r.p_value, 0.01);
}

TEST(ChiSquare, PoolsSparseBins) {
    const std::vector<double> observed{0, 1, 50, 49, 0};
    const std::vector<double> probs{0.001, 0.009, 0.5, 0.48, 0.01};
    const GofResult r = chi_square_counts(observed, probs);
    EXPECT_LT(r.bins_or_n, 5);
    EXPECT_GE(r.bins_or_n, 2);
}

TEST(ChiSquare, DegenerateRequests) {
    EXPECT_THROW(chi_square_gof(uniforms(1, 100), [](double) { return 1.0; }, 1, 0.0, 1.0), GofError);
    EXPECT_THROW(chi_square_gof(uniforms(1, 100), [](double) { return 1.0; }, 10, 1.0, 1.0), GofError);
    EXPECT_THROW(chi_square_gof(uniforms(1, 100), [](double x) { return 1.0 / (x - 0.5) / (x - 0.5); }, 10,
                                0.0, 1.0),
                 GofError);
}

TEST(QutritChamber, BinIndexing) {
    EXPECT_EQ(qutrit_chamber_bin(EigenvalueVector({1.0, 0.0, 0.0}), 4),
              qutrit_chamber_bin(EigenvalueVector({0.999, 0.0005, 0.0005}), 4));
    std::vector<int> seen(16, 0);
    RngStream rng(1, 0);
    constexpr int kDraws = 20000;
    for (int i = 0; i < kDraws; ++i) {
        const int b = qutrit_chamber_bin(spectrum(sample_hs(3, rng)), 4);
        ASSERT_GE(b, 0);
        ASSERT_LT(b, 16);
        ++seen[b];
    }
    // The corner bin next to the pure state is nearly empty under HS.
    const double c = c_hs(3).value;
    const auto p = qutrit_chamber_probabilities(
        [c](std::span<const double> l) { return c * density_hs_unnormalized(l); }, 4);
    for (int b = 0; b < 16; ++b) {
        if (p[b] * kDraws >= 5.0) EXPECT_GT(seen[b], 0) << "bin " << b;
    }
}

TEST(QutritChamber, ProbabilitiesSumToOne) {
    const double c = c_hs(3).value;
    const auto p = qutrit_chamber_probabilities(
        [c](std::span<const double> l) { return c * density_hs_unnormalized(l); }, 6);
    ASSERT_EQ(p.size(), 36u);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    const double cg = c_g_exact(3).value;
    const auto q = qutrit_chamber_probabilities(
        [cg](std::span<const double> l) { return cg * density_g_unnormalized(l); }, 6);
    EXPECT_NEAR(std::accumulate(q.begin(), q.end(), 0.0), 1.0, 1e-7);
}

TEST(QutritChamber, HilbertSchmidtSamplesFitTheirLaw) {
    const double c = c_hs(3).value;
    const auto p = qutrit_chamber_probabilities(
        [c](std::span<const double> l) { return c * density_hs_unnormalized(l); }, 8);
    RngStream rng(2, 0);
    std::vector<EigenvalueVector> s;
    for (int i = 0; i < 30000; ++i) s.push_back(spectrum(sample_hs(3, rng)));
    EXPECT_GT(chi_square_qutrit(s, p, 8).p_value, 0.01);
}

TEST(QutritChamber, HilbertSchmidtSamplesRejectGLaw) {
    const double c = c_g_exact(3).value;
    const auto p = qutrit_chamber_probabilities(
        [c](std::span<const double> l) { return c * density_g_unnormalized(l); }, 8);
    RngStream rng(3, 0);
    std::vector<EigenvalueVector> s;
    for (int i = 0; i < 30000; ++i) s.push_back(spectrum(sample_hs(3, rng)));
    EXPECT_LT(chi_square_qutrit(s, p, 8).p_value, 1e-6);
}
