#include "rsfde/structured.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rsfde/errors.hpp"

namespace rsfde {

FcdStencil fcd_coefficients(double alpha, std::size_t n)
{
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw DomainError("fcd_coefficients: alpha must lie in (1, 2], got " + std::to_string(alpha));
    }
    if (n == 0) throw DomainError("fcd_coefficients: need at least one coefficient");
    FcdStencil s{alpha, std::vector<double>(n)};
    const double g = std::tgamma(alpha / 2.0 + 1.0);
    s.coeffs[0] = std::tgamma(alpha + 1.0) / (g * g);
    for (std::size_t k = 1; k < n; ++k) {
        s.coeffs[k] = (1.0 - (alpha + 1.0) / (alpha / 2.0 + static_cast<double>(k))) * s.coeffs[k - 1];
    }
    return s;
}

TauOperator::TauOperator(std::vector<double> eigenvalues, std::shared_ptr<const SineTransformPlan> plan)
    : eigenvalues_(std::move(eigenvalues)), plan_(std::move(plan))
{
    if (!plan_) throw ConfigurationError("TauOperator: missing sine transform plan");
    detail::require_size(eigenvalues_.size(), plan_->size(), "TauOperator eigenvalues");
}

void TauOperator::apply_scaled(std::span<const double> x, std::span<double> y, bool invert) const
{
    const std::size_t n = size();
    detail::require_size(x.size(), n, "TauOperator input");
    detail::require_size(y.size(), n, "TauOperator output");
    std::vector<double> tmp(n);
    plan_->apply(x, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = invert ? tmp[i] / eigenvalues_[i] : tmp[i] * eigenvalues_[i];
    plan_->apply(tmp, y);
}

void TauOperator::apply(std::span<const double> x, std::span<double> y) const { apply_scaled(x, y, false); }

void TauOperator::solve(std::span<const double> x, std::span<double> y) const { apply_scaled(x, y, true); }

TauOperator tau_from_toeplitz(std::span<const double> first_col, std::shared_ptr<const SineTransformPlan> plan)
{
    if (first_col.empty()) throw DimensionError("tau_from_toeplitz: empty first column");
    if (!plan) plan = std::make_shared<const SineTransformPlan>(first_col.size());
    detail::require_size(plan->size(), first_col.size(), "tau_from_toeplitz plan");
    return TauOperator(cosine_sums(first_col), std::move(plan));
}

namespace {

std::vector<double> hankel_antidiagonals(std::span<const double> t)
{
    const std::size_t n = t.size();
    std::vector<double> a(2 * n - 1, 0.0);
    for (std::size_t k = 0; k + 2 <= n - 1 && k < a.size(); ++k) a[k] = t[k + 2];
    for (std::size_t k = n + 1; k < a.size(); ++k) a[k] = t[2 * n - k];
    return a;
}

// First column of the symmetric Toeplitz G with H = G J: g_d = a[n-1+d].
std::vector<double> flipped_column(std::span<const double> a, std::size_t n)
{
    std::vector<double> g(n);
    for (std::size_t d = 0; d < n; ++d) g[d] = a[n - 1 + d];
    return g;
}

} // namespace

HankelCorrection::HankelCorrection(std::span<const double> first_col)
    : n_(first_col.empty() ? throw DimensionError("HankelCorrection: empty first column") : first_col.size()),
      antidiagonals_(hankel_antidiagonals(first_col)),
      flipped_(flipped_column(antidiagonals_, n_))
{
}

void HankelCorrection::apply(std::span<const double> x, std::span<double> y) const
{
    detail::require_size(x.size(), n_, "hankel_matvec input");
    std::vector<double> reversed(x.rbegin(), x.rend());
    flipped_.apply(reversed, y);
}

std::vector<double> hankel_matvec(const HankelCorrection& h, std::span<const double> x)
{
    std::vector<double> y(h.size());
    h.apply(x, y);
    return y;
}

void TridiagH::apply(std::span<const double> x, std::span<double> y) const
{
    detail::require_size(x.size(), n, "TridiagH input");
    detail::require_size(y.size(), n, "TridiagH output");
    const double d = diagonal();
    const double o = off_diagonal();
    if (n == 1) {
        y[0] = d * x[0];
        return;
    }
    // y may alias x: carry the previous input value.
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cur = x[i];
        const double next = i + 1 < n ? x[i + 1] : 0.0;
        y[i] = d * cur + o * (prev + next);
        prev = cur;
    }
}

std::vector<double> h_eigenvalues(const TridiagH& h)
{
    std::vector<double> lambda(h.n);
    const double denom = 2.0 * static_cast<double>(h.n) + 2.0;
    for (std::size_t k = 1; k <= h.n; ++k) {
        const double s = std::sin(static_cast<double>(k) * std::numbers::pi / denom);
        lambda[k - 1] = 1.0 - (h.alpha / 6.0) * s * s;
    }
    return lambda;
}

} // namespace rsfde
