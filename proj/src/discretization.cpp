#include "rsfde/discretization.hpp"

#include <cmath>
#include <string>

#include "rsfde/errors.hpp"

namespace rsfde {

void ProblemSpec::validate() const
{
    if (dim < 1 || dim > 3) throw ConfigurationError("ProblemSpec: dimension must be 1, 2 or 3");
    const auto d = static_cast<std::size_t>(dim);
    if (domain.size() != d || alphas.size() != d || kappas.size() != d) {
        throw ConfigurationError("ProblemSpec: domain, alphas and kappas need one entry per axis");
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (!(domain[i].upper > domain[i].lower)) throw DomainError("ProblemSpec: empty interval on an axis");
        if (!(alphas[i] > 1.0 && alphas[i] <= 2.0)) throw DomainError("ProblemSpec: alpha must lie in (1, 2]");
        if (!(kappas[i] > 0.0)) throw DomainError("ProblemSpec: kappa must be positive");
    }
    if (n == 0) throw ConfigurationError("ProblemSpec: need at least one interior point");
    if (time_steps == 0) throw ConfigurationError("ProblemSpec: need at least one time step");
    if (!(final_time > 0.0)) throw DomainError("ProblemSpec: final time must be positive");
    if (!coefficient) throw ConfigurationError("ProblemSpec: missing coefficient e(x,t)");
    if (!initial) throw ConfigurationError("ProblemSpec: missing initial condition");
}

double ProblemSpec::mesh_width(int axis) const
{
    const auto& iv = domain.at(static_cast<std::size_t>(axis));
    return (iv.upper - iv.lower) / static_cast<double>(n + 1);
}

AxisOperators make_axis_operators(double alpha, double kappa, double mesh_width, double time_step, std::size_t n,
                                  std::shared_ptr<const SineTransformPlan> plan)
{
    FcdStencil stencil = fcd_coefficients(alpha, n);
    CirculantEmbedding toeplitz(stencil.coeffs);
    TauOperator tau_s = tau_from_toeplitz(stencil.coeffs, plan);
    TridiagH h_op{alpha, n};
    std::vector<double> h_eigs = h_eigenvalues(h_op);
    const double eta = kappa * time_step / (2.0 * std::pow(mesh_width, alpha));
    return AxisOperators{std::move(stencil), std::move(toeplitz), std::move(tau_s), h_op,
                         std::move(h_eigs), mesh_width, eta};
}

Discretization::Discretization(ProblemSpec spec) : spec_(std::move(spec))
{
    spec_.validate();
    shape_ = GridShape{spec_.n, spec_.dim};
    tau_ = spec_.time_step();
    plan_ = std::make_shared<const SineTransformPlan>(spec_.n);
    for (int i = 0; i < spec_.dim; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        axes_.push_back(make_axis_operators(spec_.alphas[ii], spec_.kappas[ii], spec_.mesh_width(i), tau_, spec_.n,
                                            plan_));
    }
    u_ = sample(spec_.initial);
}

double Discretization::node(int axis, std::size_t j) const
{
    return spec_.domain[static_cast<std::size_t>(axis)].lower + static_cast<double>(j) * axes_[axis].mesh_width;
}

std::vector<double> Discretization::point(std::size_t index) const
{
    std::vector<double> x(static_cast<std::size_t>(dim()));
    for (int a = 0; a < dim(); ++a) {
        x[static_cast<std::size_t>(a)] = node(a, index % shape_.n + 1);
        index /= shape_.n;
    }
    return x;
}

std::vector<double> Discretization::sample(const SpaceFunction& fn) const
{
    std::vector<double> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(point(i));
    return v;
}

std::vector<double> Discretization::sample(const SpaceTimeFunction& fn, double t) const
{
    std::vector<double> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(point(i), t);
    return v;
}

std::shared_ptr<const std::vector<double>> Discretization::e_half(std::size_t m) const
{
    std::lock_guard lock(e_mutex_);
    if (!e_cache_ || e_level_ != m) {
        e_cache_ = std::make_shared<const std::vector<double>>(sample(spec_.coefficient, half_time(m)));
        e_level_ = m;
    }
    return e_cache_;
}

void Discretization::apply_H(std::span<const double> x, std::span<double> y) const
{
    detail::require_size(x.size(), size(), "apply_H input");
    std::span<const double> src = x;
    for (int a = 0; a < dim(); ++a) {
        along_axis(a, src, y, [&](std::span<const double> in, std::span<double> out) { axes_[a].h_op.apply(in, out); });
        src = y;
    }
}

void Discretization::apply_H_inverse(std::span<const double> x, std::span<double> y) const
{
    detail::require_size(x.size(), size(), "apply_H_inverse input");
    std::vector<double> tmp(shape_.n);
    std::span<const double> src = x;
    for (int a = 0; a < dim(); ++a) {
        const auto& lambda = axes_[a].h_eigs;
        along_axis(a, src, y, [&](std::span<const double> in, std::span<double> out) {
            plan_->apply(in, tmp);
            for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] /= lambda[k];
            plan_->apply(tmp, out);
        });
        src = y;
    }
}

void Discretization::apply_S_alpha(std::span<const double> x, std::span<double> y) const
{
    detail::require_size(x.size(), size(), "apply_S_alpha input");
    detail::require_size(y.size(), size(), "apply_S_alpha output");
    std::vector<double> acc(size(), 0.0), term(size());
    ToeplitzWorkspace ws;
    for (int i = 0; i < dim(); ++i) {
        along_axis(i, x, term, [&](std::span<const double> in, std::span<double> out) {
            axes_[i].toeplitz.apply(in, out, ws);
        });
        for (int l = 0; l < dim(); ++l) {
            if (l == i) continue;
            along_axis(l, term, term,
                       [&](std::span<const double> in, std::span<double> out) { axes_[l].h_op.apply(in, out); });
        }
        const double eta = axes_[i].eta;
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += eta * term[k];
    }
    std::copy(acc.begin(), acc.end(), y.begin());
}

void Discretization::apply_Hinv_S(std::span<const double> x, std::span<double> y) const
{
    detail::require_size(x.size(), size(), "apply_Hinv_S input");
    detail::require_size(y.size(), size(), "apply_Hinv_S output");
    std::vector<double> acc(size(), 0.0), term(size());
    std::vector<double> t1(shape_.n), t2(shape_.n);
    ToeplitzWorkspace ws;
    for (int i = 0; i < dim(); ++i) {
        const auto& ax = axes_[i];
        along_axis(i, x, term, [&](std::span<const double> in, std::span<double> out) {
            ax.toeplitz.apply(in, t1, ws);
            plan_->apply(t1, t2);
            for (std::size_t k = 0; k < t2.size(); ++k) t2[k] /= ax.h_eigs[k];
            plan_->apply(t2, out);
        });
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += ax.eta * term[k];
    }
    std::copy(acc.begin(), acc.end(), y.begin());
}

void Discretization::apply_A_tilde(std::size_t m, std::span<const double> x, std::span<double> y) const
{
    if (m >= spec_.time_steps) throw DimensionError("apply_A_tilde: time index out of range");
    apply_Hinv_S(x, y);
    const auto e = e_half(m);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += (*e)[k] * x[k];
}

void Discretization::apply_A_tilde_unsimplified(std::size_t m, std::span<const double> x, std::span<double> y) const
{
    if (m >= spec_.time_steps) throw DimensionError("apply_A_tilde: time index out of range");
    std::vector<double> s(size());
    apply_S_alpha(x, s);
    apply_H_inverse(s, y);
    const auto e = e_half(m);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += (*e)[k] * x[k];
}

std::vector<double> Discretization::source_vector(std::size_t m) const
{
    if (!spec_.source) throw ConfigurationError("build_rhs: problem has no source function");
    const std::size_t n = shape_.n;
    const std::size_t ext = n + 2;
    const int d = dim();
    const double t = half_time(m);

    // f on the full (n+2)^d node set, axis 0 fastest.
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= ext;
    std::vector<double> cur(total);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (int a = 0; a < d; ++a) {
            x[static_cast<std::size_t>(a)] = node(a, r % ext);
            r /= ext;
        }
        cur[idx] = spec_.source(x, t);
    }

    // Apply the compact stencil [w, 1 - 2w, w], w = alpha_a/24, along each
    // axis, shrinking that axis from n+2 nodes to its n interior nodes.
    std::vector<std::size_t> dims(static_cast<std::size_t>(d), ext);
    for (int a = 0; a < d; ++a) {
        const double w = axes_[a].h_op.off_diagonal();
        const double c = axes_[a].h_op.diagonal();
        std::size_t stride = 1;
        for (int l = 0; l < a; ++l) stride *= dims[static_cast<std::size_t>(l)];
        std::size_t outer = 1;
        for (int l = a + 1; l < d; ++l) outer *= dims[static_cast<std::size_t>(l)];
        std::vector<double> next(outer * n * stride);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t src = o * ext * stride + j * stride;
                const std::size_t dst = o * n * stride + j * stride;
                for (std::size_t i = 0; i < stride; ++i) {
                    next[dst + i] = w * cur[src + i] + c * cur[src + stride + i] + w * cur[src + 2 * stride + i];
                }
            }
        }
        dims[static_cast<std::size_t>(a)] = n;
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> Discretization::build_rhs(std::size_t m) const
{
    if (m >= spec_.time_steps) throw DimensionError("build_rhs: time index out of range");
    const std::size_t len = size();
    std::vector<double> f = source_vector(m);
    std::vector<double> hf(len), hs(len), rhs(len);
    apply_H_inverse(f, hf);
    apply_Hinv_S(u_, hs);
    const auto e = e_half(m);
    for (std::size_t k = 0; k < len; ++k) rhs[k] = (*e)[k] * u_[k] - hs[k] + tau_ * hf[k];
    return rhs;
}

void Discretization::set_solution(std::vector<double> u)
{
    detail::require_size(u.size(), size(), "set_solution");
    u_ = std::move(u);
}

} // namespace rsfde
