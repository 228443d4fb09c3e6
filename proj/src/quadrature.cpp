#include "superfid/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "superfid/errors.hpp"

namespace superfid {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr unsigned kMaxDepth = 18;
constexpr double kHalfPi = boost::math::constants::half_pi<double>();

void check_converged(const char* what, double value, double error, double tolerance) {
    if (!std::isfinite(value) || error > tolerance * std::max(std::abs(value), 1e-300)) {
        throw NonConvergence(std::string(what) + ": error estimate above tolerance", value, error);
    }
}

}  // namespace

QuadratureResult interval_quadrature(const std::function<double(double)>& f, double a, double b,
                                     double tolerance) {
    double error = 0.0;
    const double value = gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, tolerance, &error);
    check_converged("interval_quadrature", value, error, std::max(tolerance, 1e-15));
    return {value, error};
}

QuadratureResult endpoint_singular_quadrature(const std::function<double(double)>& f, double a,
                                              double b, double tolerance) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    const double value = integrator.integrate(f, a, b, tolerance, &error, &l1);
    // The reported error is the change between the last two levels; each level
    // roughly squares the relative error, so the result itself is far better.
    const double scale = std::max(l1, 1e-300);
    const double projected = error * error / scale;
    check_converged("endpoint_singular_quadrature", value, projected,
                    std::max(tolerance, 1e-15) * std::max(1.0, scale / std::max(std::abs(value), 1e-300)));
    return {value, std::max(projected, std::numeric_limits<double>::epsilon() * scale)};
}

QuadratureResult simplex_quadrature(const SimplexFunction& f, int n, double tolerance) {
    if (n == 2) {
        auto g = [&](double theta) {
            const double s = std::sin(theta);
            const double c = std::cos(theta);
            const std::array<double, 2> lam{s * s, c * c};
            return 2.0 * s * c * f(lam);
        };
        double error = 0.0;
        const double value = gauss_kronrod<double, 15>::integrate(g, 0.0, kHalfPi, kMaxDepth,
                                                                   tolerance * 0.5, &error);
        check_converged("simplex_quadrature(N=2)", value, error, tolerance);
        return {value, error};
    }
    if (n == 3) {
        // y = (sin t cos p, sin t sin p, cos t); surface element sin t dt dp.
        double worst_inner = 0.0;
        auto outer = [&](double theta) {
            const double st = std::sin(theta);
            const double ct = std::cos(theta);
            auto inner = [&](double phi) {
                const double y1 = st * std::cos(phi);
                const double y2 = st * std::sin(phi);
                const std::array<double, 3> lam{y1 * y1, y2 * y2, ct * ct};
                return 4.0 * y1 * y2 * ct * st * f(lam);
            };
            double err = 0.0;
            const double v = gauss_kronrod<double, 15>::integrate(inner, 0.0, kHalfPi, kMaxDepth,
                                                                   tolerance * 0.1, &err);
            worst_inner = std::max(worst_inner, err);
            return v;
        };
        double error = 0.0;
        const double value = gauss_kronrod<double, 15>::integrate(outer, 0.0, kHalfPi, kMaxDepth,
                                                                   tolerance * 0.5, &error);
        const double total_error = error + kHalfPi * worst_inner;
        check_converged("simplex_quadrature(N=3)", value, total_error, tolerance);
        return {value, total_error};
    }
    throw UnsupportedDimension("simplex_quadrature: only N = 2 and N = 3 are supported");
}

}  // namespace superfid
