#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rsfde/errors.hpp"
#include "rsfde/manufactured.hpp"

using namespace rsfde;

namespace {

/// Left RL derivative of order alpha in (1,2) by the Gruenwald-Letnikov sum
/// with Richardson extrapolation; independent of the Gamma-ratio formula.
double gl_left(double (*p)(double), double alpha, double x, std::size_t steps)
{
    const double h = x / double(steps);
    double w = 1.0, s = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        s += w * p(x - double(k) * h);
        w *= (double(k) - alpha) / double(k + 1);
    }
    return s / std::pow(h, alpha);
}

double bump(double x) { return std::pow(x, 4) * std::pow(1.0 - x, 4); }
double bump_reflected(double x) { return bump(1.0 - x); }

} // namespace

TEST_CASE("Riesz normalisation")
{
    CHECK(riesz_sigma(1.5) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(riesz_sigma(2.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("left RL derivative of x^4 at 1, alpha = 1.5")
{
    CHECK(rl_left_monomial(4.0, 1.5, 1.0) == doctest::Approx(24.0 / std::tgamma(3.5)).epsilon(1e-14));
    CHECK(rl_left_monomial(4.0, 1.5, 1.0) == doctest::Approx(7.22162666941128).epsilon(1e-12));
}

TEST_CASE("bump profile Riesz derivative, frozen quadrature value")
{
    // mpmath at 40 digits: the Gamma-ratio series, and independently the second
    // derivative of the fractional integral by quadrature (good to ~1e-8)
    const PolynomialProfile p = PolynomialProfile::bump();
    CHECK(p.riesz_derivative(1.5, 0.3) == doctest::Approx(-0.00097030511732743867).epsilon(1e-11));
    CHECK(p.riesz_derivative(1.5, 0.3) == doctest::Approx(-0.00097030510512667505).epsilon(1e-7));
    CHECK(p.value(0.5) == doctest::Approx(1.0 / 256.0).epsilon(1e-15));
}

TEST_CASE("left derivative agrees with a Gruenwald-Letnikov sum")
{
    const PolynomialProfile p = PolynomialProfile::bump();
    for (double a : {1.2, 1.5, 1.8}) {
        for (double x : {0.25, 0.5, 0.9}) {
            const double g1 = gl_left(bump, a, x, 20000), g2 = gl_left(bump, a, x, 40000);
            const double extrapolated = 2.0 * g2 - g1;
            CHECK(p.left_derivative(a, x) == doctest::Approx(extrapolated).epsilon(1e-6));
        }
        const double x = 0.4;
        const double right = 2.0 * gl_left(bump_reflected, a, 1.0 - x, 40000) - gl_left(bump_reflected, a, 1.0 - x, 20000);
        const double riesz = riesz_sigma(a) * (p.left_derivative(a, x) + right);
        CHECK(p.riesz_derivative(a, x) == doctest::Approx(riesz).epsilon(1e-6));
    }
}

TEST_CASE("separable solution values and time derivative")
{
    const SeparableSolution u(100.0, {1.5});
    const std::vector<double> mid{0.5};
    CHECK(u.value(mid, 0.0) == doctest::Approx(100.0 / 256.0).epsilon(1e-15));
    CHECK(u.time_derivative(mid, 0.0) == doctest::Approx(-100.0 / 256.0).epsilon(1e-15));
    const SeparableSolution u3(1e8, {1.5, 1.7, 1.9});
    const std::vector<double> x{0.2, 0.5, 0.7};
    const double want = 1e8 * std::exp(-0.3) * bump(0.2) * bump(0.5) * bump(0.7);
    CHECK(u3.value(x, 0.3) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("manufactured source satisfies the equation")
{
    const SeparableSolution u(100.0, {1.5});
    const std::vector<double> kappa{100.0};
    for (double x : {0.1, 0.45, 0.8}) {
        for (double t : {0.0, 0.3, 1.0}) {
            const std::vector<double> p{x};
            const double e = (x * x + std::exp(-t)) / 50.0;
            const double h = 1e-4;
            const double ut = (u.value(p, t + h) - u.value(p, t - h)) / (2.0 * h);
            const PolynomialProfile prof = PolynomialProfile::bump();
            const double frac = 100.0 * std::exp(-t) * prof.riesz_derivative(1.5, x);
            const double f = u.source(p, t, e, kappa);
            CHECK(std::abs(e * ut - 100.0 * frac - f) <= 1e-6 * std::max(1.0, std::abs(f)));
        }
    }
}

TEST_CASE("unsupported profiles are refused")
{
    CHECK_THROWS_AS(PolynomialProfile({0, 0, 1}), UnsupportedSource);   // x^2 is not symmetric
    CHECK_THROWS_AS(PolynomialProfile({1, 0, -1, 0, 0}), UnsupportedSource);
    CHECK_NOTHROW(PolynomialProfile({0, 0, 1, -2, 1}));                // x^2 (1-x)^2
}

TEST_CASE("symmetric profile derivative is symmetric")
{
    const PolynomialProfile p({0, 0, 1, -2, 1});
    for (double x : {0.1, 0.3}) CHECK(p.riesz_derivative(1.7, x) == doctest::Approx(p.riesz_derivative(1.7, 1.0 - x)).epsilon(1e-12));
}
