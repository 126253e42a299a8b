#include "rsfde/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "rsfde/errors.hpp"

namespace rsfde {

double riesz_sigma(double alpha) { return -1.0 / (2.0 * std::cos(alpha * std::numbers::pi / 2.0)); }

double rl_left_monomial(double power, double alpha, double x)
{
    if (x == 0.0 && power > alpha) return 0.0;
    return std::tgamma(power + 1.0) / std::tgamma(power + 1.0 - alpha) * std::pow(x, power - alpha);
}

PolynomialProfile::PolynomialProfile(std::vector<double> coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.size() < 3) throw UnsupportedSource("PolynomialProfile: degree must be at least 2");
    if (coeffs_[0] != 0.0 || coeffs_[1] != 0.0) {
        throw UnsupportedSource("PolynomialProfile: p(0) and p'(0) must vanish");
    }
    double scale = 0.0;
    for (double c : coeffs_) scale = std::max(scale, std::abs(c));
    for (int i = 0; i <= 16; ++i) {
        const double x = i / 16.0;
        if (std::abs(value(x) - value(1.0 - x)) > 1e-12 * scale) {
            throw UnsupportedSource("PolynomialProfile: profile must satisfy p(x) = p(1-x)");
        }
    }
}

PolynomialProfile PolynomialProfile::bump()
{
    // x^4 (1-x)^4 = sum_{k=0}^4 (-1)^k C(4,k) x^{4+k}
    return PolynomialProfile({0, 0, 0, 0, 1, -4, 6, -4, 1});
}

double PolynomialProfile::value(double x) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double PolynomialProfile::left_derivative(double alpha, double x) const
{
    double acc = 0.0;
    for (std::size_t k = 2; k < coeffs_.size(); ++k) {
        if (coeffs_[k] != 0.0) acc += coeffs_[k] * rl_left_monomial(static_cast<double>(k), alpha, x);
    }
    return acc;
}

double PolynomialProfile::riesz_derivative(double alpha, double x) const
{
    return riesz_sigma(alpha) * (left_derivative(alpha, x) + left_derivative(alpha, 1.0 - x));
}

SeparableSolution::SeparableSolution(double amplitude, std::vector<double> alphas, PolynomialProfile profile)
    : amplitude_(amplitude), alphas_(std::move(alphas)), profile_(std::move(profile))
{
    const auto c = profile_.coefficients();
    for (double alpha : alphas_) {
        std::vector<double> w(c.size(), 0.0);
        const double sigma = riesz_sigma(alpha);
        for (std::size_t k = 2; k < c.size(); ++k) {
            const double kk = static_cast<double>(k);
            w[k] = sigma * c[k] * std::tgamma(kk + 1.0) / std::tgamma(kk + 1.0 - alpha);
        }
        weights_.push_back(std::move(w));
    }
}

double SeparableSolution::profile_riesz(int axis, double x) const
{
    const auto& w = weights_[static_cast<std::size_t>(axis)];
    const double alpha = alphas_[static_cast<std::size_t>(axis)];
    // sum_k w_k x^{k-alpha} = x^{-alpha} poly(x); poly = O(x^2), so the
    // one-sided term vanishes at x = 0.
    auto side = [&](double y) {
        if (y <= 0.0) return 0.0;
        double poly = 0.0;
        for (auto it = w.rbegin(); it != w.rend(); ++it) poly = poly * y + *it;
        return poly * std::pow(y, -alpha);
    };
    return side(x) + side(1.0 - x);
}

double SeparableSolution::value(std::span<const double> x, double t) const
{
    detail::require_size(x.size(), alphas_.size(), "SeparableSolution point");
    double v = amplitude_ * std::exp(-t);
    for (double xi : x) v *= profile_.value(xi);
    return v;
}

double SeparableSolution::time_derivative(std::span<const double> x, double t) const { return -value(x, t); }

double SeparableSolution::riesz_derivative(int axis, std::span<const double> x, double t) const
{
    detail::require_size(x.size(), alphas_.size(), "SeparableSolution point");
    double v = amplitude_ * std::exp(-t);
    for (std::size_t l = 0; l < x.size(); ++l) {
        v *= static_cast<int>(l) == axis ? profile_riesz(axis, x[l]) : profile_.value(x[l]);
    }
    return v;
}

double SeparableSolution::source(std::span<const double> x, double t, double e,
                                 std::span<const double> kappas) const
{
    detail::require_size(kappas.size(), alphas_.size(), "SeparableSolution kappas");
    double f = e * time_derivative(x, t);
    for (int i = 0; i < dim(); ++i) f -= kappas[static_cast<std::size_t>(i)] * riesz_derivative(i, x, t);
    return f;
}

} // namespace rsfde
