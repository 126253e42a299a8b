#ifndef RSFDE_MANUFACTURED_HPP
#define RSFDE_MANUFACTURED_HPP

#include <span>
#include <vector>

namespace rsfde {

/// sigma_alpha = -1 / (2 cos(alpha pi / 2)), the Riesz normalisation.
double riesz_sigma(double alpha);

/// Left Riemann-Liouville derivative of order alpha of x^p on (0, x]:
/// Gamma(p+1) / Gamma(p+1-alpha) x^(p-alpha).
double rl_left_monomial(double power, double alpha, double x);

/// Polynomial p(x) = sum_k c_k x^k on [0,1] that is symmetric about 1/2 and
/// vanishes to second order at the end points, so both one-sided fractional
/// derivatives exist in closed form and the right one is the reflection of
/// the left one.
class PolynomialProfile {
public:
    /// Throws UnsupportedSource if p(x) != p(1-x) or c_0, c_1 are nonzero.
    explicit PolynomialProfile(std::vector<double> coeffs);

    /// x^4 (1-x)^4.
    static PolynomialProfile bump();

    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double value(double x) const;
    double left_derivative(double alpha, double x) const;
    double riesz_derivative(double alpha, double x) const;

private:
    std::vector<double> coeffs_;
};

/// u(x,t) = C e^{-t} prod_i p(x_i) on the unit box, with p a PolynomialProfile.
/// Gamma ratios are tabulated per axis at construction, so evaluation costs
/// two pow() calls per axis.
class SeparableSolution {
public:
    SeparableSolution(double amplitude, std::vector<double> alphas,
                      PolynomialProfile profile = PolynomialProfile::bump());

    int dim() const noexcept { return static_cast<int>(alphas_.size()); }
    double amplitude() const noexcept { return amplitude_; }

    double value(std::span<const double> x, double t) const;
    double time_derivative(std::span<const double> x, double t) const;
    /// Riesz derivative of u along `axis`.
    double riesz_derivative(int axis, std::span<const double> x, double t) const;

    /// f = e u_t - sum_i kappa_i d^{alpha_i} u, the source that makes u exact.
    double source(std::span<const double> x, double t, double e, std::span<const double> kappas) const;

private:
    double profile_riesz(int axis, double x) const;

    double amplitude_;
    std::vector<double> alphas_;
    PolynomialProfile profile_;
    // weights_[axis][k] = sigma * c_k Gamma(k+1) / Gamma(k+1-alpha)
    std::vector<std::vector<double>> weights_;
};

} // namespace rsfde

#endif
