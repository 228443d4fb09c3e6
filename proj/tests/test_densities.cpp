#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "superfid/constants.hpp"
#include "superfid/densities.hpp"
#include "superfid/quadrature.hpp"

using namespace superfid;

namespace {

using V = std::vector<double>;

double g(const V& l) { return density_g_unnormalized(l); }
double b(const V& l) { return density_bures_unnormalized(l); }
double hs(const V& l) { return density_hs_unnormalized(l); }

}  // namespace

TEST(Measures, TagsRoundTrip) {
    for (MeasureKind m : {MeasureKind::HilbertSchmidt, MeasureKind::Bures, MeasureKind::SuperfidelityG}) {
        EXPECT_EQ(parse_measure(measure_tag(m)), m);
    }
    EXPECT_FALSE(parse_measure("fubini").has_value());
}

TEST(Densities, HandValues) {
    EXPECT_NEAR(g({0.9, 0.1}), 1.5084944665313014, 1e-14);
    EXPECT_NEAR(b({0.9, 0.1}), 2.1333333333333333, 1e-14);
    EXPECT_NEAR(hs({0.9, 0.1}), 0.64, 1e-15);
    EXPECT_NEAR(hs({0.6, 0.3, 0.1}), 0.0009, 1e-17);
    EXPECT_NEAR(g({0.6, 0.3, 0.1}), 0.0012247448713915890, 1e-17);
    EXPECT_NEAR(b({0.6, 0.3, 0.1}), 0.026619856874997496, 1e-16);
}

TEST(Densities, DegenerateSpectraVanish) {
    EXPECT_EQ(g({0.5, 0.5}), 0.0);
    EXPECT_EQ(b({0.5, 0.5}), 0.0);
    EXPECT_EQ(hs({0.5, 0.5}), 0.0);
    const double third = 1.0 / 3.0;
    EXPECT_EQ(g({third, third, 1.0 - 2.0 * third}), 0.0);
}

TEST(Densities, Singularities) {
    EXPECT_THROW(g({1.0, 0.0}), Singularity);
    EXPECT_THROW(b({0.7, 0.3, 0.0}), Singularity);
    EXPECT_NO_THROW(hs({1.0, 0.0}));
    EXPECT_THROW(g({0.7, 0.4}), DomainError);
    EXPECT_THROW(hs({1.1, -0.1}), DomainError);
}

TEST(Densities, LogFormsAgree) {
    const V l{0.5, 0.3, 0.15, 0.05};
    EXPECT_NEAR(log_density_g_unnormalized(l), std::log(g(l)), 1e-12);
    EXPECT_NEAR(log_density_bures_unnormalized(l), std::log(b(l)), 1e-12);
    EXPECT_NEAR(log_density_hs_unnormalized(l), std::log(hs(l)), 1e-12);
    EXPECT_NEAR(log_density_ratio_g_bures(l), std::log(g(l) / b(l)), 1e-12);
    EXPECT_EQ(log_density_hs_unnormalized(V{0.5, 0.5}), -std::numeric_limits<double>::infinity());
}

TEST(Densities, LogFormsStayFiniteForLargeN) {
    V l(24);
    double s = 0.0;
    for (int i = 0; i < 24; ++i) s += (l[i] = 1.0 + i);
    for (double& x : l) x /= s;
    std::sort(l.rbegin(), l.rend());
    EXPECT_EQ(hs(l), 0.0);  // underflows in linear space
    EXPECT_TRUE(std::isfinite(log_density_hs_unnormalized(l)));
    EXPECT_TRUE(std::isfinite(log_density_g_unnormalized(l)));
    EXPECT_TRUE(std::isfinite(log_density_bures_unnormalized(l)));
}

TEST(DensityProperties, PermutationSymmetry) {
    std::array<double, 4> l{0.45, 0.3, 0.2, 0.05};
    std::sort(l.begin(), l.end());
    const V ref(l.begin(), l.end());
    do {
        const V p(l.begin(), l.end());
        ASSERT_NEAR(g(p), g(ref), 1e-15 * g(ref));
        ASSERT_NEAR(b(p), b(ref), 1e-14 * b(ref));
        ASSERT_NEAR(hs(p), hs(ref), 1e-15 * hs(ref));
    } while (std::next_permutation(l.begin(), l.end()));
}

TEST(DensityProperties, QubitGIsProportionalToBures) {
    for (double t = 0.01; t < 0.995; t += 0.01) {
        const V l{t, 1.0 - t};
        if (std::abs(2.0 * t - 1.0) < 1e-9) continue;
        ASSERT_NEAR(g(l) / b(l), 1.0 / std::sqrt(2.0), 1e-12);
        ASSERT_NEAR(density_ratio_g_bures(l), 1.0 / std::sqrt(2.0), 1e-12);
        // normalized densities coincide pointwise
        ASSERT_NEAR(c_g_exact(2).value * g(l), (2.0 / std::numbers::pi) * b(l), 1e-10);
    }
}

TEST(PurityMoments, ClosedForms) {
    EXPECT_DOUBLE_EQ(purity_mean_hs(2), 0.8);
    EXPECT_DOUBLE_EQ(purity_mean_hs(3), 0.6);
    EXPECT_NEAR(purity_variance_hs(2), 18.0 / 1050.0, 1e-16);
    EXPECT_NEAR(purity_variance_hs(3), 128.0 / 13200.0, 1e-16);
    for (int n = 2; n < 16; ++n) EXPECT_GT(purity_mean_hs(n), purity_mean_hs(n + 1));
    EXPECT_THROW(purity_mean_hs(1), InvalidDimension);
}

TEST(UnitaryVolume, SmallN) {
    const double pi = std::numbers::pi;
    EXPECT_NEAR(projective_unitary_volume(2), pi, 1e-13);
    EXPECT_NEAR(projective_unitary_volume(3), std::pow(pi, 3) / 2.0, 1e-12);
    EXPECT_NEAR(projective_unitary_volume(4), std::pow(pi, 6) / 12.0, 1e-10);
}

TEST(QubitLaw, CdfValues) {
    EXPECT_EQ(cdf_g2(0.0), 0.0);
    EXPECT_DOUBLE_EQ(cdf_g2(1.0), 1.0);
    EXPECT_NEAR(cdf_g2(0.5), 0.5, 1e-15);
    EXPECT_NEAR(cdf_g2(0.25), 0.47116555718878135, 1e-14);
    EXPECT_THROW(cdf_g2(1.5), DomainError);
}

TEST(QubitLaw, PdfValues) {
    EXPECT_EQ(pdf_g2_marginal(0.5), 0.0);
    EXPECT_NEAR(pdf_g2_marginal(0.9), c_g_exact(2).value * g({0.9, 0.1}), 1e-14);
    EXPECT_NEAR(pdf_g2_marginal(0.9), 1.3581221810508402, 1e-13);
    EXPECT_THROW(pdf_g2_marginal(0.0), Singularity);
    EXPECT_THROW(pdf_g2_marginal(1.0), Singularity);
}

TEST(QubitLaw, PdfIsDerivativeOfCdf) {
    const double h = 1e-5;
    for (double t = 0.01; t < 0.99; t += 0.0137) {
        const double fd = (cdf_g2(t + h) - cdf_g2(t - h)) / (2.0 * h);
        ASSERT_NEAR(pdf_g2_marginal(t), fd, 1e-6) << "t=" << t;
    }
}

TEST(QubitLaw, PdfIntegratesToOne) {
    // Symmetric law; integrating towards t = 0 keeps the singular endpoint exactly representable.
    EXPECT_NEAR(2.0 * endpoint_singular_quadrature(pdf_g2_marginal, 0.0, 0.5, 1e-10).value, 1.0, 1e-8);
}

TEST(QubitLaw, CdfMonotone) {
    double prev = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double c = cdf_g2(i / 10000.0);
        ASSERT_GE(c, prev);
        prev = c;
    }
}

TEST(Grid, SmallResolutionLayout) {
    const auto grid = density_grid_qutrit(4, MeasureKind::SuperfidelityG);
    EXPECT_EQ(grid.size(), 16u);
    EXPECT_THROW(density_grid_qutrit(1, MeasureKind::Bures), DomainError);
}

TEST(Grid, BarycenterHasZeroDensity) {
    const auto grid = density_grid_qutrit(7, MeasureKind::SuperfidelityG);
    const auto it = std::find_if(grid.begin(), grid.end(), [](const GridPoint& p) {
        return std::abs(p.lambda1 - 1.0 / 3.0) < 1e-12 && std::abs(p.lambda2 - 1.0 / 3.0) < 1e-12;
    });
    ASSERT_NE(it, grid.end());
    EXPECT_NEAR(it->density, 0.0, 1e-20);
}

TEST(Grid, PermutationSymmetric) {
    for (MeasureKind m : {MeasureKind::SuperfidelityG, MeasureKind::Bures}) {
        const auto grid = density_grid_qutrit(40, m);
        std::map<std::array<long long, 3>, double> table;
        auto key = [](double a, double b, double c) {
            return std::array<long long, 3>{std::llround(a * 1e9), std::llround(b * 1e9), std::llround(c * 1e9)};
        };
        for (const GridPoint& p : grid) table[key(p.lambda1, p.lambda2, p.lambda3)] = p.density;
        for (const GridPoint& p : grid) {
            const double v = p.density;
            for (const auto& k : {key(p.lambda2, p.lambda1, p.lambda3), key(p.lambda3, p.lambda2, p.lambda1),
                                  key(p.lambda1, p.lambda3, p.lambda2)}) {
                const auto it = table.find(k);
                ASSERT_NE(it, table.end());
                ASSERT_NEAR(it->second, v, 1e-12 * std::max(1.0, v));
            }
        }
    }
}

TEST(Grid, WeightedSumIsNearOne) {
    for (MeasureKind m : {MeasureKind::SuperfidelityG, MeasureKind::Bures, MeasureKind::HilbertSchmidt}) {
        double sum = 0.0;
        for (const GridPoint& p : density_grid_qutrit(200, m)) sum += p.density * p.weight;
        EXPECT_NEAR(sum, 1.0, 0.02) << measure_tag(m);
    }
}

TEST(Grid, WeightsCoverTheSimplex) {
    double area = 0.0;
    for (const GridPoint& p : density_grid_qutrit(200, MeasureKind::HilbertSchmidt)) area += p.weight;
    EXPECT_NEAR(area, 0.5, 1e-3);  // Lebesgue area of {l1 + l2 <= 1}
}

TEST(Grid, GAndBuresDiffer) {
    const auto a = density_grid_qutrit(30, MeasureKind::SuperfidelityG);
    const auto c = density_grid_qutrit(30, MeasureKind::Bures);
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i].density - c[i].density));
    EXPECT_GT(gap, 0.1);
}
