#include "superfid/densities.hpp"

#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>

#include "superfid/constants.hpp"
#include "superfid/errors.hpp"

namespace superfid {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_simplex(std::span<const double> l) {
    if (l.empty()) throw DomainError("eigenvalue density: empty eigenvalue vector");
    double sum = 0.0;
    for (double x : l) {
        if (!(x >= 0.0)) throw DomainError("eigenvalue density: negative eigenvalue");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw DomainError("eigenvalue density: eigenvalues do not sum to 1");
    }
}

// 1 - sum l_i^2 written as 2 sum_{i<j} l_i l_j, which keeps full relative
// accuracy near pure states.
double mixedness(std::span<const double> l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = i + 1; j < l.size(); ++j) s += l[i] * l[j];
    }
    return 2.0 * s;
}

double vandermonde_sq(std::span<const double> l) {
    double v = 1.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = i + 1; j < l.size(); ++j) {
            const double d = l[i] - l[j];
            v *= d * d;
        }
    }
    return v;
}

double log_vandermonde_sq(std::span<const double> l) {
    double v = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = i + 1; j < l.size(); ++j) {
            const double d = std::abs(l[i] - l[j]);
            if (d == 0.0) return kNegInf;
            v += 2.0 * std::log(d);
        }
    }
    return v;
}

double require_mixed(std::span<const double> l, const char* what) {
    const double m = mixedness(l);
    if (!(m > 0.0)) throw Singularity(std::string(what) + ": pure state");
    return m;
}

void require_full_rank(std::span<const double> l, const char* what) {
    for (double x : l) {
        if (!(x > 0.0)) throw Singularity(std::string(what) + ": zero eigenvalue");
    }
}

}  // namespace

std::string_view measure_tag(MeasureKind m) {
    switch (m) {
        case MeasureKind::HilbertSchmidt: return "hs";
        case MeasureKind::Bures: return "bures";
        case MeasureKind::SuperfidelityG: return "g";
    }
    return "?";
}

std::optional<MeasureKind> parse_measure(std::string_view tag) {
    if (tag == "hs") return MeasureKind::HilbertSchmidt;
    if (tag == "bures") return MeasureKind::Bures;
    if (tag == "g") return MeasureKind::SuperfidelityG;
    return std::nullopt;
}

double density_g_unnormalized(std::span<const double> l) {
    check_simplex(l);
    const double m = require_mixed(l, "density_g_unnormalized");
    return vandermonde_sq(l) / std::sqrt(m);
}

double density_bures_unnormalized(std::span<const double> l) {
    check_simplex(l);
    require_full_rank(l, "density_bures_unnormalized");
    double v = 1.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        prod *= l[i];
        for (std::size_t j = i + 1; j < l.size(); ++j) {
            const double d = l[i] - l[j];
            v *= d * d / (l[i] + l[j]);
        }
    }
    return v / std::sqrt(prod);
}

double density_hs_unnormalized(std::span<const double> l) {
    check_simplex(l);
    return vandermonde_sq(l);
}

double log_density_g_unnormalized(std::span<const double> l) {
    check_simplex(l);
    const double m = require_mixed(l, "log_density_g_unnormalized");
    return log_vandermonde_sq(l) - 0.5 * std::log(m);
}

double log_density_bures_unnormalized(std::span<const double> l) {
    check_simplex(l);
    require_full_rank(l, "log_density_bures_unnormalized");
    double v = log_vandermonde_sq(l);
    for (std::size_t i = 0; i < l.size(); ++i) {
        v -= 0.5 * std::log(l[i]);
        for (std::size_t j = i + 1; j < l.size(); ++j) v -= std::log(l[i] + l[j]);
    }
    return v;
}

double log_density_hs_unnormalized(std::span<const double> l) {
    check_simplex(l);
    return log_vandermonde_sq(l);
}

double density_unnormalized(MeasureKind m, std::span<const double> l) {
    switch (m) {
        case MeasureKind::HilbertSchmidt: return density_hs_unnormalized(l);
        case MeasureKind::Bures: return density_bures_unnormalized(l);
        case MeasureKind::SuperfidelityG: return density_g_unnormalized(l);
    }
    throw DomainError("unknown measure");
}

double log_density_unnormalized(MeasureKind m, std::span<const double> l) {
    switch (m) {
        case MeasureKind::HilbertSchmidt: return log_density_hs_unnormalized(l);
        case MeasureKind::Bures: return log_density_bures_unnormalized(l);
        case MeasureKind::SuperfidelityG: return log_density_g_unnormalized(l);
    }
    throw DomainError("unknown measure");
}

double log_density_ratio_g_bures(std::span<const double> l) {
    check_simplex(l);
    const double m = require_mixed(l, "density_ratio_g_bures");
    double v = -0.5 * std::log(m);
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i] == 0.0) return kNegInf;
        v += 0.5 * std::log(l[i]);
        for (std::size_t j = i + 1; j < l.size(); ++j) v += std::log(l[i] + l[j]);
    }
    return v;
}

double density_ratio_g_bures(std::span<const double> l) {
    return std::exp(log_density_ratio_g_bures(l));
}

double purity_mean_hs(int n) {
    if (n < 2) throw InvalidDimension("purity_mean_hs: N must be at least 2");
    const double n2 = static_cast<double>(n) * n;
    return 2.0 * n / (n2 + 1.0);
}

double purity_variance_hs(int n) {
    if (n < 2) throw InvalidDimension("purity_variance_hs: N must be at least 2");
    const double n2 = static_cast<double>(n) * n;
    return 2.0 * (n2 - 1.0) * (n2 - 1.0) / ((n2 + 1.0) * (n2 + 1.0) * (n2 + 2.0) * (n2 + 3.0));
}

double projective_unitary_volume(int n) {
    if (n < 2) throw InvalidDimension("projective_unitary_volume: N must be at least 2");
    double log_v = 0.5 * n * (n - 1) * std::log(kPi);
    for (int d = 1; d < n; ++d) log_v -= std::lgamma(d + 1.0);
    return std::exp(log_v);
}

double cdf_g2(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("cdf_g2: t outside [0, 1]");
    const double v = (2.0 / kPi) *
                     (std::sqrt((1.0 - t) * t) - 2.0 * std::sqrt((1.0 - t) * t * t * t) +
                      std::asin(std::sqrt(t)));
    return std::clamp(v, 0.0, 1.0);
}

double pdf_g2_marginal(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("pdf_g2_marginal: t outside [0, 1]");
    if (t == 0.0 || t == 1.0) throw Singularity("pdf_g2_marginal: endpoint singularity");
    const double d = 2.0 * t - 1.0;
    return (2.0 / kPi) * d * d / std::sqrt(t * (1.0 - t));
}

namespace {

// |d(lambda_1, lambda_2) / d(x_1, x_2)| for lambda_i = x_i^2 / |x|^2 on x_1+x_2+x_3 = 1.
double sqrt_coordinate_jacobian(double x1, double x2) {
    const double x3 = 1.0 - x1 - x2;
    const double q = x1 * x1 + x2 * x2 + x3 * x3;
    const double q1 = 2.0 * (x1 - x3);
    const double q2 = 2.0 * (x2 - x3);
    const double qq = q * q;
    const double a11 = (2.0 * x1 * q - x1 * x1 * q1) / qq;
    const double a12 = -x1 * x1 * q2 / qq;
    const double a21 = -x2 * x2 * q1 / qq;
    const double a22 = (2.0 * x2 * q - x2 * x2 * q2) / qq;
    return std::abs(a11 * a22 - a12 * a21);
}

}  // namespace

std::vector<GridPoint> density_grid_qutrit(int resolution, MeasureKind measure) {
    if (resolution < 2) throw DomainError("density_grid_qutrit: resolution must be at least 2");
    double norm = 0.0;
    switch (measure) {
        case MeasureKind::SuperfidelityG: norm = c_g_exact(3).value; break;
        case MeasureKind::Bures: norm = c_bures_quadrature(3).value; break;
        case MeasureKind::HilbertSchmidt: norm = c_hs(3).value; break;
    }
    const double r = resolution;
    const double cell_area = 1.0 / (2.0 * r * r);
    std::vector<GridPoint> grid;
    grid.reserve(static_cast<std::size_t>(resolution) * resolution);
    auto emit = [&](double a, double b, double c) {
        const double x1 = a / r;
        const double x2 = b / r;
        const double x3 = c / r;
        const double q = x1 * x1 + x2 * x2 + x3 * x3;
        GridPoint p;
        p.lambda1 = x1 * x1 / q;
        p.lambda2 = x2 * x2 / q;
        p.lambda3 = x3 * x3 / q;
        p.weight = sqrt_coordinate_jacobian(x1, x2) * cell_area;
        const double lam[3] = {p.lambda1, p.lambda2, p.lambda3};
        try {
            p.density = norm * density_unnormalized(measure, lam);
        } catch (const Singularity&) {
            p.singular = true;
            p.density = 0.0;
        }
        grid.push_back(p);
    };
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; i + j < resolution; ++j) {
            const int k_up = resolution - 1 - i - j;
            emit(i + 1.0 / 3.0, j + 1.0 / 3.0, k_up + 1.0 / 3.0);
            const int k_down = resolution - 2 - i - j;
            if (k_down >= 0) emit(i + 2.0 / 3.0, j + 2.0 / 3.0, k_down + 2.0 / 3.0);
        }
    }
    return grid;
}

}  // namespace superfid
