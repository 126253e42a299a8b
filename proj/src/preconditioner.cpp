#include "rsfde/preconditioner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rsfde/errors.hpp"

namespace rsfde {

CoefficientBounds compute_e_bar(const ProblemSpec& spec, std::size_t time_stride)
{
    spec.validate();
    if (time_stride == 0) throw ConfigurationError("compute_e_bar: stride must be positive");
    const GridShape g{spec.n, spec.dim};
    std::vector<std::vector<double>> points(g.size(), std::vector<double>(static_cast<std::size_t>(spec.dim)));
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        std::size_t r = idx;
        for (int a = 0; a < spec.dim; ++a) {
            const double h = spec.mesh_width(a);
            points[idx][static_cast<std::size_t>(a)] =
                spec.domain[static_cast<std::size_t>(a)].lower + static_cast<double>(r % g.n + 1) * h;
            r /= g.n;
        }
    }
    const double tau = spec.time_step();

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    auto scan = [&](std::size_t m) {
        const double t = (static_cast<double>(m) + 0.5) * tau;
        for (const auto& x : points) {
            const double e = spec.coefficient(x, t);
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    };
    const std::size_t last = spec.time_steps - 1;
    for (std::size_t m = 0; m < spec.time_steps; m += time_stride) scan(m);
    if (last % time_stride != 0) scan(last);

    if (!(lo > 0.0)) {
        throw InvalidCoefficient("compute_e_bar: e(x,t) has non-positive minimum " + std::to_string(lo));
    }
    return CoefficientBounds{0.5 * (hi + lo), hi, lo};
}

PrecondSpectrum build_precond(const Discretization& state, double e_bar)
{
    if (!(e_bar > 0.0)) throw InvalidCoefficient("build_precond: e_bar must be positive");
    const GridShape g = state.shape();
    const auto axes = state.axes();
    std::vector<double> diag(g.size(), e_bar);
    for (std::size_t idx = 0; idx < diag.size(); ++idx) {
        std::size_t r = idx;
        for (const auto& ax : axes) {
            const std::size_t k = r % g.n;
            r /= g.n;
            diag[idx] += ax.eta * ax.tau_s.eigenvalues()[k] / ax.h_eigs[k];
        }
    }
    return PrecondSpectrum{g, e_bar, std::move(diag), state.shared_plan()};
}

void apply_P_power(const PrecondSpectrum& p, double power, std::span<const double> x, std::span<double> y)
{
    detail::require_size(x.size(), p.diag.size(), "preconditioner input");
    detail::require_size(y.size(), p.diag.size(), "preconditioner output");
    dst1_all_axes(*p.plan, p.shape, x, y);
    if (power == -1.0) {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] /= p.diag[k];
    } else if (power == -0.5) {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] /= std::sqrt(p.diag[k]);
    } else if (power == 0.5) {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] *= std::sqrt(p.diag[k]);
    } else if (power == 1.0) {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] *= p.diag[k];
    } else {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] *= std::pow(p.diag[k], power);
    }
    dst1_all_axes(*p.plan, p.shape, y, y);
}

std::vector<double> apply_P_inv(const PrecondSpectrum& p, std::span<const double> x)
{
    std::vector<double> y(x.size());
    apply_P_power(p, -1.0, x, y);
    return y;
}

std::vector<double> apply_P_inv_sqrt(const PrecondSpectrum& p, std::span<const double> x)
{
    std::vector<double> y(x.size());
    apply_P_power(p, -0.5, x, y);
    return y;
}

std::vector<double> apply_P_sqrt(const PrecondSpectrum& p, std::span<const double> x)
{
    std::vector<double> y(x.size());
    apply_P_power(p, 0.5, x, y);
    return y;
}

} // namespace rsfde
