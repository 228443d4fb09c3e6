#include "superfid/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "detail/format.hpp"
#include "superfid/batch.hpp"
#include "superfid/constants.hpp"
#include "superfid/samplers.hpp"
#include "superfid/similarity.hpp"
#include "superfid/statlab.hpp"

namespace superfid {

using detail::num;

namespace {

constexpr double kPi = std::numbers::pi;

class Check {
public:
    Check(std::string id, std::string description) : start_(std::chrono::steady_clock::now()) {
        r_.id = std::move(id);
        r_.description = std::move(description);
        r_.passed = true;
    }
    void metric(std::string name, double value) { r_.metrics.emplace_back(std::move(name), value); }
    void require(bool ok, const std::string& what) {
        if (!ok) r_.passed = false;
        note((ok ? "" : "FAILED ") + what);
    }
    void note(const std::string& what) {
        if (!r_.detail.empty()) r_.detail += "; ";
        r_.detail += what;
    }
    CheckResult finish() {
        r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return std::move(r_);
    }

private:
    CheckResult r_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<int> dims_or(const VerifyOptions& opt, std::vector<int> fallback) {
    if (opt.dim) return {*opt.dim};
    return fallback;
}

ShardPlan plan_for(const VerifyOptions& opt, std::uint64_t salt) {
    return {opt.seed * 1000003ULL + salt, opt.shards, Execution::Parallel};
}

DensityMatrix interior_state(int n, RngStream& rng) {
    ComplexMatrix m = 0.7 * sample_hs(n, rng).matrix() + (0.3 / n) * ComplexMatrix::Identity(n, n);
    return DensityMatrix(m);
}

std::vector<double> largest_eigenvalues(const SampleBatch& b) {
    std::vector<double> v;
    v.reserve(b.eigen_records.size());
    for (const auto& e : b.eigen_records) v.push_back(e[0]);
    return v;
}

}  // namespace

CheckResult check_qubit_fidelity_equality(const VerifyOptions& opt) {
    Check c("1", "F = G on qubits");
    RngStream rng(opt.seed, 101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const DensityMatrix a = sample_hs(2, rng);
        const DensityMatrix b = sample_hs(2, rng);
        worst = std::max(worst, std::abs(fidelity(a, b) - superfidelity(a, b)));
    }
    c.metric("max_abs_f_minus_g", worst);
    c.require(worst <= 1e-9, "max |F-G| = " + num(worst, 3) + " over 1000 pairs (<= 1e-9)");
    return c.finish();
}

CheckResult check_fidelity_bound(const VerifyOptions& opt) {
    Check c("2", "F <= G for N = 3, 4, 5");
    RngStream rng(opt.seed, 102);
    for (int n : {3, 4, 5}) {
        double worst = -1.0;
        for (int i = 0; i < 1000; ++i) {
            const DensityMatrix a = sample_hs(n, rng);
            const DensityMatrix b = sample_hs(n, rng);
            worst = std::max(worst, fidelity(a, b) - superfidelity(a, b));
        }
        c.metric("max_f_minus_g_n" + std::to_string(n), worst);
        c.require(worst <= 1e-9, "N=" + std::to_string(n) + " max(F-G) = " + num(worst, 3));
    }
    return c.finish();
}

CheckResult check_metric_axioms(const VerifyOptions& opt) {
    Check c("3", "d_G is a metric (triangle inequality, zero self-distance, symmetry)");
    RngStream rng(opt.seed, 103);
    for (int n : {2, 3, 4}) {
        double worst_triangle = -std::numeric_limits<double>::infinity();
        double worst_self = 0.0;
        double worst_sym = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const DensityMatrix a = sample_hs(n, rng);
            const DensityMatrix b = sample_hs(n, rng);
            const DensityMatrix d = sample_hs(n, rng);
            const double ab = dist_g(a, b);
            worst_triangle = std::max(worst_triangle, dist_g(a, d) - ab - dist_g(b, d));
            worst_self = std::max(worst_self, dist_g(a, a));
            worst_sym = std::max(worst_sym, std::abs(ab - dist_g(b, a)));
        }
        const std::string tag = "N=" + std::to_string(n);
        c.metric("max_triangle_excess_n" + std::to_string(n), worst_triangle);
        c.metric("max_self_distance_n" + std::to_string(n), worst_self);
        c.require(worst_triangle <= 1e-12, tag + " max triangle excess " + num(worst_triangle, 3));
        c.require(worst_self <= 1e-10, tag + " max d(a,a) " + num(worst_self, 3));
        c.require(worst_sym <= 1e-12, tag + " max asymmetry " + num(worst_sym, 3));
    }
    return c.finish();
}

CheckResult check_line_elements(const VerifyOptions& opt) {
    Check c("4", "line elements: finite differences of d_G^2, qubit G = B'");
    RngStream rng(opt.seed, 104);
    for (int n : {2, 3}) {
        double worst = 0.0;
        double worst_qubit_gap = 0.0;
        std::vector<double> ratios;
        for (int i = 0; i < 100; ++i) {
            const DensityMatrix rho = interior_state(n, rng);
            const TangentDirection d = random_tangent(n, rng);
            const double exact = line_element_g(rho, d).value;
            const double e3 = std::abs(0.5 * fd_second_derivative(dist_g_squared, rho, d, 1e-3).value - exact);
            worst = std::max(worst, e3);
            const double e_coarse =
                std::abs(0.5 * fd_second_derivative(dist_g_squared, rho, d, 1e-2).value - exact);
            const double e_fine =
                std::abs(0.5 * fd_second_derivative(dist_g_squared, rho, d, 5e-3).value - exact);
            if (e_fine > 1e-10) ratios.push_back(e_coarse / e_fine);
            if (n == 2) {
                worst_qubit_gap =
                    std::max(worst_qubit_gap, std::abs(exact - line_element_bprime(rho, d).value));
            }
        }
        const std::string tag = "N=" + std::to_string(n);
        c.metric("max_fd_error_n" + std::to_string(n), worst);
        c.require(worst <= 1e-4, tag + " max |FD - analytic| at h=1e-3: " + num(worst, 3));
        double median = 0.0;
        if (!ratios.empty()) {
            std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
            median = ratios[ratios.size() / 2];
        }
        c.metric("median_error_ratio_n" + std::to_string(n), median);
        c.require(ratios.size() >= 50 && median > 3.5 && median < 4.5,
                  tag + " error ratio h=1e-2 vs 5e-3: " + num(median, 4) + " (second order: 4)");
        if (n == 2) {
            c.metric("max_qubit_g_bprime_gap", worst_qubit_gap);
            c.require(worst_qubit_gap <= 1e-8, "N=2 max |g_G - g_B'| " + num(worst_qubit_gap, 3));
        }
    }
    return c.finish();
}

CheckResult check_normalization_quadrature(const VerifyOptions&) {
    Check c("5", "normalization constants by quadrature");
    const double inv2 = 1.0 / c_g_quadrature(2).value;
    const double err2 = std::abs(inv2 - kPi / (2.0 * std::sqrt(2.0)));
    c.metric("inverse_c2_quadrature", inv2);
    c.require(err2 <= 1e-6, "N=2 1/C = " + num(inv2, 10) + ", |diff| " + num(err2, 3));
    const double closed2 = 2.0 * std::sqrt(2.0) / (3.0 * kPi) * c_hs(2).value;
    c.require(std::abs(closed2 - c_g_exact(2).value) <= 1e-14, "C_2^G closed form " + num(closed2, 7));

    const double c3 = c_g_quadrature(3).value;
    const double closed3 = 432.0 * std::sqrt(2.0) / (317.0 * kPi) * c_hs(3).value;
    const double rel3 = std::abs(c3 / closed3 - 1.0);
    c.metric("c3_quadrature", c3);
    c.metric("c3_relative_error", rel3);
    c.require(rel3 <= 1e-3, "N=3 C = " + num(c3, 10) + " vs closed form " + num(closed3, 10) +
                                ", rel " + num(rel3, 3));
    c.note("rel. to 1030.67: " + num(std::abs(c3 / 1030.67 - 1.0), 3));
    return c.finish();
}

CheckResult check_monte_carlo_identity(const VerifyOptions& opt) {
    Check c("6", "E_HS[1/sqrt(1 - tr rho^2)] = 3 pi / (2 sqrt 2) for N = 2");
    const MonteCarloConstant mc = c_g_monte_carlo(2, 1000000, plan_for(opt, 6));
    const double target = 3.0 * kPi / (2.0 * std::sqrt(2.0));
    const double z = (mc.mean_inverse_sqrt - target) / mc.mean_inverse_sqrt_se;
    c.metric("mean", mc.mean_inverse_sqrt);
    c.metric("std_error", mc.mean_inverse_sqrt_se);
    c.metric("z", z);
    c.require(std::abs(z) <= 3.0, "mean " + num(mc.mean_inverse_sqrt, 7) + " +- " +
                                      num(mc.mean_inverse_sqrt_se, 2) + " vs " + num(target, 7) +
                                      " (z = " + num(z, 3) + ")");
    c.require(!mc.unstable, "discarded near-pure samples: " + num(mc.discarded));
    return c.finish();
}

CheckResult check_jensen_bound(const VerifyOptions& opt) {
    Check c("7", "C_N^G below the Jensen bound");
    for (int n : {2, 3}) {
        const double v = c_g_quadrature(n).value;
        const double bound = c_g_jensen_bound(n).value;
        c.metric("c_quadrature_n" + std::to_string(n), v);
        c.require(v <= bound, "N=" + std::to_string(n) + " quadrature " + num(v, 8) + " <= " + num(bound, 8));
    }
    for (int n : {4, 5}) {
        const MonteCarloConstant mc = c_g_monte_carlo(n, 1000000, plan_for(opt, 70 + n));
        const double bound = c_g_jensen_bound(n).value;
        const double se = *mc.estimate.std_error;
        c.metric("c_mc_n" + std::to_string(n), mc.estimate.value);
        c.metric("c_mc_se_n" + std::to_string(n), se);
        c.require(mc.estimate.value <= bound + 3.0 * se,
                  "N=" + std::to_string(n) + " MC " + num(mc.estimate.value, 8) + " +- " + num(se, 2) +
                      " <= " + num(bound, 8));
    }
    return c.finish();
}

CheckResult check_purity_statistics(const VerifyOptions& opt) {
    Check c("8", "HS purity mean and variance");
    for (int n : dims_or(opt, {2, 3})) {
        const std::vector<double> p = hs_purities(n, 1000000, plan_for(opt, 80 + n));
        const McEstimate m = mc_mean(p);
        const VarianceEstimate v = mc_variance(p);
        const double mean = purity_mean_hs(n);
        const double var = purity_variance_hs(n);
        const std::string tag = "N=" + std::to_string(n);
        c.metric("mean_n" + std::to_string(n), m.mean);
        c.metric("mean_se_n" + std::to_string(n), m.std_error);
        c.metric("variance_n" + std::to_string(n), v.variance);
        c.metric("variance_se_n" + std::to_string(n), v.std_error);
        c.require(std::abs(m.mean - mean) <= 3.0 * m.std_error,
                  tag + " mean " + num(m.mean, 7) + " +- " + num(3.0 * m.std_error, 2) + " (3 SE) vs " + num(mean, 7));
        c.require(std::abs(v.variance - var) <= 3.0 * v.std_error,
                  tag + " variance " + num(v.variance, 7) + " +- " + num(3.0 * v.std_error, 2) + " vs " +
                      num(var, 7));
    }
    return c.finish();
}

CheckResult check_series_estimator(const VerifyOptions& opt) {
    Check c("9", "series estimator of C_2^G with MC moments, k_max = 20");
    const SeriesEstimate s = c_g_series(2, 20, MomentSource::MonteCarlo, 1000000, plan_for(opt, 9));
    const double target = 2.0 * std::sqrt(2.0) / kPi;
    const double rel = std::abs(s.estimate.value / target - 1.0);
    bool monotone = true;
    for (std::size_t k = 1; k < s.inverse_partial_sums.size(); ++k) {
        monotone = monotone && s.inverse_partial_sums[k] > s.inverse_partial_sums[k - 1];
    }
    c.metric("estimate", s.estimate.value);
    c.metric("relative_error", rel);
    c.metric("last_term", s.last_term);
    c.require(monotone, "partial sums increasing");
    c.require(rel <= 0.01, "C = " + num(s.estimate.value, 6) + " vs " + num(target, 6) + ", rel " + num(rel, 3) +
                               " (<= 0.01); last term " + num(s.last_term, 3));
    return c.finish();
}

CheckResult check_qubit_sampler(const VerifyOptions& opt) {
    Check c("10", "qubit G sampler: inverse-CDF law, coincidence with Bures");
    const SampleBatch g = sample_batch(MeasureKind::SuperfidelityG, 2, 100000, plan_for(opt, 10));
    const SampleBatch b = sample_batch(MeasureKind::Bures, 2, 100000, plan_for(opt, 11));
    const auto lg = largest_eigenvalues(g);
    const auto lb = largest_eigenvalues(b);
    const GofResult ks = ks_test(lg, [](double t) { return 2.0 * cdf_g2(t) - 1.0; }, 0.5, 1.0);
    c.metric("ks_p", ks.p_value);
    c.require(ks.p_value > 0.01, "KS vs F_G,2: D = " + num(ks.statistic, 3) + ", p = " + num(ks.p_value, 3));
    c.require(std::abs(cdf_g2(0.5) - 0.5) <= 4.0 * std::numeric_limits<double>::epsilon(),
              "F_G,2(1/2) = " + num(cdf_g2(0.5)));
    const GofResult two = ks_two_sample(lg, lb);
    c.metric("ks2_p", two.p_value);
    c.require(two.p_value > 0.01, "two-sample KS vs Bures: p = " + num(two.p_value, 3));
    return c.finish();
}

CheckResult check_rejection_sampler(const VerifyOptions& opt) {
    Check c("11", "rejection sampler for N = 3");
    const EnvelopeAudit audit = audit_density_ratio_envelope(3, 100000);
    c.metric("audit_max_ratio", audit.max_observed);
    c.metric("audit_bound", audit.bound);
    c.require(audit.verified && audit.max_observed <= audit.bound + 1e-9,
              "envelope audit: max ratio " + num(audit.max_observed, 10) + " <= " + num(audit.bound, 10));

    const SampleBatch batch = sample_batch(MeasureKind::SuperfidelityG, 3, 100000, plan_for(opt, 111));
    const int sub = 10;
    const double cg = c_g_exact(3).value;
    const auto probs = qutrit_chamber_probabilities(
        [cg](std::span<const double> l) { return cg * density_g_unnormalized(l); }, sub);
    const GofResult chi = chi_square_qutrit(batch.eigen_records, probs, sub);
    c.metric("chi2_p", chi.p_value);
    c.require(chi.p_value > 0.01, "chi-square vs C_3^G density: " + num(chi.statistic, 5) + " on " +
                                      std::to_string(chi.bins_or_n - 1) + " dof, p = " + num(chi.p_value, 3));

    const McEstimate m = mc_mean(batch.purity_records);
    const double z = (m.mean - purity_mean_hs(3)) / m.std_error;
    c.metric("mean_purity", m.mean);
    c.metric("z_vs_hs", z);
    c.require(z > 5.0, "mean purity " + num(m.mean, 6) + " vs HS 0.6, z = " + num(z, 4));
    const RejectionReport& r = *batch.rejection;
    c.metric("acceptance_rate", r.empirical_rate());
    c.note("acceptance " + num(r.empirical_rate(), 4) + " (1/c = " + num(1.0 / r.bound_constant, 4) + ")");
    return c.finish();
}

CheckResult check_rejection_constant(const VerifyOptions&) {
    Check c("12", "rejection constant c");
    const double c3 = rejection_constant_c(3);
    const double cross =
        c_g_jensen_bound(3).value / c_bures_quadrature(3).value * sup_density_ratio_unnormalized(3);
    const double rel = std::abs(c3 / cross - 1.0);
    c.metric("c3", c3);
    c.metric("relative_gap", rel);
    c.require(rel <= 1e-6, "c(3) = " + num(c3, 8) + " vs Jensen/C_B * sup = " + num(cross, 8) + ", rel " + num(rel, 3));
    bool increasing = true;
    std::string values;
    for (int n = 3; n <= 8; ++n) {
        if (n > 3) increasing = increasing && rejection_constant_c(n) > rejection_constant_c(n - 1);
        values += (n > 3 ? ", " : "") + num(rejection_constant_c(n), 4);
    }
    c.require(increasing, "c(3..8) increasing: " + values);
    return c.finish();
}

constexpr int kGridResolution = 400;

CheckResult check_density_grids(const VerifyOptions&) {
    Check c("13", "qutrit density grids");
    for (MeasureKind m : {MeasureKind::SuperfidelityG, MeasureKind::Bures}) {
        const auto grid = density_grid_qutrit(kGridResolution, m);
        double sum = 0.0;
        for (const GridPoint& p : grid) sum += p.density * p.weight;
        const std::string tag(measure_tag(m));
        c.metric("sum_" + tag, sum);
        c.require(std::abs(sum - 1.0) <= 0.02, tag + " weighted sum " + num(sum, 7));

        // Grid nodes sit at sqrt-coordinates x with x1 + x2 + x3 = 1 and 3 R x integral,
        // so the sorted integer triple identifies the permutation orbit exactly.
        struct Row {
            std::array<long, 3> key;
            double density;
        };
        std::vector<Row> rows;
        rows.reserve(grid.size());
        for (const GridPoint& p : grid) {
            std::array<double, 3> x{std::sqrt(p.lambda1), std::sqrt(p.lambda2), std::sqrt(p.lambda3)};
            const double total = x[0] + x[1] + x[2];
            std::array<long, 3> k{};
            for (int i = 0; i < 3; ++i) k[i] = std::lround(3.0 * kGridResolution * x[i] / total);
            std::sort(k.begin(), k.end());
            rows.push_back({k, p.density});
        }
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.key < b.key; });
        double worst = 0.0;
        bool orbits_complete = true;
        for (std::size_t i = 0; i < rows.size();) {
            std::size_t j = i + 1;
            while (j < rows.size() && rows[j].key == rows[i].key) ++j;
            const auto& k = rows[i].key;
            const bool tie = k[0] == k[1] || k[1] == k[2];
            const bool all_tie = k[0] == k[2];
            const std::size_t expected = all_tie ? 1 : tie ? 3 : 6;
            orbits_complete = orbits_complete && (j - i) == expected;
            for (std::size_t t = i; t < j; ++t) {
                const double scale = std::max(1.0, std::abs(rows[i].density));
                worst = std::max(worst, std::abs(rows[t].density - rows[i].density) / scale);
            }
            i = j;
        }
        c.metric("max_symmetry_gap_" + tag, worst);
        c.require(orbits_complete, tag + " permutation orbits " + (orbits_complete ? "complete" : "incomplete"));
        c.require(worst <= 1e-12, tag + " permutation symmetry: max rel gap " + num(worst, 3));
    }
    return c.finish();
}

CheckResult check_purity_ordering(const VerifyOptions& opt) {
    Check c("purity-order", "mean purity under G exceeds the HS mean");
    for (int n : dims_or(opt, {2, 3})) {
        const std::uint64_t count = n == 2 ? 100000 : 20000;
        const SampleBatch b = sample_batch(MeasureKind::SuperfidelityG, n, count, plan_for(opt, 200 + n));
        const McEstimate m = mc_mean(b.purity_records);
        const double z = (m.mean - purity_mean_hs(n)) / m.std_error;
        c.metric("mean_g_n" + std::to_string(n), m.mean);
        c.metric("z_n" + std::to_string(n), z);
        c.require(z > 5.0, "N=" + std::to_string(n) + " E_G = " + num(m.mean, 6) + " +- " + num(m.std_error, 2) +
                               " vs E_HS = " + num(purity_mean_hs(n), 6) + " (z = " + num(z, 4) + ")");
    }
    return c.finish();
}

bool is_known_suite(std::string_view suite) {
    return suite == "metric" || suite == "density" || suite == "sampler" || suite == "purity" || suite == "all";
}

std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& opt) {
    using Fn = CheckResult (*)(const VerifyOptions&);
    std::vector<std::pair<std::string, Fn>> checks;
    const bool all = suite == "all";
    if (!is_known_suite(suite)) throw DomainError("unknown verification suite: " + std::string(suite));
    if (all || suite == "metric") {
        checks.insert(checks.end(), {{"1", check_qubit_fidelity_equality},
                                     {"2", check_fidelity_bound},
                                     {"3", check_metric_axioms},
                                     {"4", check_line_elements}});
    }
    if (all || suite == "density") {
        checks.insert(checks.end(), {{"5", check_normalization_quadrature},
                                     {"6", check_monte_carlo_identity},
                                     {"7", check_jensen_bound},
                                     {"9", check_series_estimator},
                                     {"12", check_rejection_constant},
                                     {"13", check_density_grids}});
    }
    if (all || suite == "sampler") {
        checks.insert(checks.end(), {{"10", check_qubit_sampler}, {"11", check_rejection_sampler}});
    }
    if (all || suite == "purity") {
        checks.insert(checks.end(), {{"8", check_purity_statistics}, {"purity-order", check_purity_ordering}});
    }
    std::vector<CheckResult> out;
    for (const auto& [id, fn] : checks) {
        const auto start = std::chrono::steady_clock::now();
        try {
            out.push_back(fn(opt));
        } catch (const std::exception& e) {
            CheckResult r;
            r.id = id;
            r.description = "check raised an error";
            r.passed = false;
            r.detail = e.what();
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace superfid
