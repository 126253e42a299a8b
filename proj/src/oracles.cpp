#include "rsfde/oracles.hpp"

#include <cmath>
#include <numbers>

#include "rsfde/errors.hpp"

namespace rsfde::oracle {

namespace {

double node(const ProblemSpec& spec, int axis, std::size_t j)
{
    const Interval& iv = spec.domain[static_cast<std::size_t>(axis)];
    return iv.lower + static_cast<double>(j) * spec.mesh_width(axis);
}

std::size_t total_size(const ProblemSpec& spec)
{
    std::size_t s = 1;
    for (int i = 0; i < spec.dim; ++i) s *= spec.n;
    return s;
}

double half_time(const ProblemSpec& spec, std::size_t m)
{
    return (static_cast<double>(m) + 0.5) * spec.time_step();
}

} // namespace

double fcd_closed_form(double alpha, std::size_t k)
{
    const double g = std::tgamma(alpha + 1.0);
    if (k == 0) {
        const double d = std::tgamma(alpha / 2.0 + 1.0);
        return g / (d * d);
    }
    if (alpha == 2.0) return k == 1 ? -1.0 : 0.0;
    const double kk = static_cast<double>(k);
    const double lr = std::lgamma(kk - alpha / 2.0) - std::lgamma(alpha / 2.0 + kk + 1.0);
    return -g * std::sin(std::numbers::pi * alpha / 2.0) * std::exp(lr) / std::numbers::pi;
}

std::vector<double> fcd_column(double alpha, std::size_t n)
{
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = fcd_closed_form(alpha, k);
    return t;
}

Eigen::MatrixXd toeplitz(std::span<const double> t)
{
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = t[static_cast<std::size_t>(std::abs(i - j))];
    }
    return a;
}

Eigen::MatrixXd hankel_part(std::span<const double> t)
{
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i + 2 < n; ++i) col(i) = t[static_cast<std::size_t>(i + 2)];
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    // first column, then the last column as the reversal, filled along antidiagonals
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Eigen::Index s = i + j;
            h(i, j) = s < n ? col(s) : col(n - 1 - (s - (n - 1)));
        }
    }
    return h;
}

Eigen::MatrixXd sine_matrix(std::size_t n)
{
    const auto nn = static_cast<Eigen::Index>(n);
    const double scale = std::sqrt(2.0 / static_cast<double>(n + 1));
    Eigen::MatrixXd s(nn, nn);
    for (Eigen::Index j = 0; j < nn; ++j) {
        for (Eigen::Index k = 0; k < nn; ++k) {
            s(j, k) = scale * std::sin(std::numbers::pi * static_cast<double>((j + 1) * (k + 1)) /
                                       static_cast<double>(n + 1));
        }
    }
    return s;
}

Eigen::VectorXd tau_eigenvalues(std::span<const double> t)
{
    const std::size_t n = t.size();
    Eigen::VectorXd q(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double s = t[0];
        for (std::size_t j = 1; j < n; ++j) {
            s += 2.0 * t[j] * std::cos(std::numbers::pi * static_cast<double>(j * (i + 1)) / static_cast<double>(n + 1));
        }
        q(static_cast<Eigen::Index>(i)) = s;
    }
    return q;
}

Eigen::MatrixXd tau_matrix(std::span<const double> t)
{
    const Eigen::MatrixXd s = sine_matrix(t.size());
    return s * tau_eigenvalues(t).asDiagonal() * s;
}

Eigen::MatrixXd compact_H(double alpha, std::size_t n)
{
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(nn, nn);
    const double c = alpha / 24.0;
    for (Eigen::Index i = 0; i < nn; ++i) {
        h(i, i) -= 2.0 * c;
        if (i + 1 < nn) {
            h(i, i + 1) += c;
            h(i + 1, i) += c;
        }
    }
    return h;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return k;
}

Eigen::MatrixXd axis_kron(const std::vector<Eigen::MatrixXd>& factors)
{
    if (factors.empty()) throw DimensionError("axis_kron: no factors");
    Eigen::MatrixXd k = factors.back();
    for (std::size_t i = factors.size() - 1; i-- > 0;) k = kron(k, factors[i]);
    return k;
}

Eigen::MatrixXd spd_power(const Eigen::MatrixXd& a, double power)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::VectorXd d = es.eigenvalues().array().pow(power);
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<double> etas(const ProblemSpec& spec)
{
    std::vector<double> e(static_cast<std::size_t>(spec.dim));
    for (int i = 0; i < spec.dim; ++i) {
        const auto k = static_cast<std::size_t>(i);
        e[k] = spec.kappas[k] * spec.time_step() / (2.0 * std::pow(spec.mesh_width(i), spec.alphas[k]));
    }
    return e;
}

Eigen::MatrixXd H_full(const ProblemSpec& spec)
{
    std::vector<Eigen::MatrixXd> f;
    for (int i = 0; i < spec.dim; ++i) f.push_back(compact_H(spec.alphas[static_cast<std::size_t>(i)], spec.n));
    return axis_kron(f);
}

Eigen::MatrixXd S_alpha(const ProblemSpec& spec, bool use_tau)
{
    const std::vector<double> eta = etas(spec);
    const auto big = static_cast<Eigen::Index>(total_size(spec));
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(big, big);
    for (int i = 0; i < spec.dim; ++i) {
        std::vector<Eigen::MatrixXd> f;
        for (int j = 0; j < spec.dim; ++j) {
            const double a = spec.alphas[static_cast<std::size_t>(j)];
            if (j != i) {
                f.push_back(compact_H(a, spec.n));
            } else {
                const std::vector<double> t = fcd_column(a, spec.n);
                f.push_back(use_tau ? tau_matrix(t) : toeplitz(t));
            }
        }
        s += eta[static_cast<std::size_t>(i)] * axis_kron(f);
    }
    return s;
}

Eigen::VectorXd E_half(const ProblemSpec& spec, std::size_t m)
{
    const std::size_t big = total_size(spec);
    const double t = half_time(spec, m);
    Eigen::VectorXd e(static_cast<Eigen::Index>(big));
    std::vector<double> x(static_cast<std::size_t>(spec.dim));
    for (std::size_t idx = 0; idx < big; ++idx) {
        std::size_t r = idx;
        for (int i = 0; i < spec.dim; ++i) {
            x[static_cast<std::size_t>(i)] = node(spec, i, r % spec.n + 1);
            r /= spec.n;
        }
        e(static_cast<Eigen::Index>(idx)) = spec.coefficient(x, t);
    }
    return e;
}

Eigen::MatrixXd A_tilde(const ProblemSpec& spec, std::size_t m, bool use_tau)
{
    Eigen::MatrixXd a = H_full(spec).partialPivLu().solve(S_alpha(spec, use_tau));
    a.diagonal() += E_half(spec, m);
    return a;
}

Eigen::MatrixXd preconditioner(const ProblemSpec& spec, double e_bar)
{
    const Eigen::MatrixXd hm = spd_power(H_full(spec), -0.5);
    Eigen::MatrixXd p = hm * S_alpha(spec, true) * hm;
    p.diagonal().array() += e_bar;
    return p;
}

Eigen::VectorXd boundary_source(const ProblemSpec& spec, std::size_t m)
{
    if (!spec.source) throw ConfigurationError("boundary_source: no source function");
    const int d = spec.dim;
    const std::size_t n = spec.n;
    const std::size_t big = total_size(spec);
    const double t = half_time(spec, m);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(big));

    // mask bit i set: axis i sits on the boundary and carries the alpha_i/24
    // identity factor; otherwise the axis is interior and carries H_i.
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        Eigen::VectorXd data = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(big));
        std::vector<double> x(static_cast<std::size_t>(d));
        std::vector<std::size_t> free_axes, fixed_axes;
        for (int i = 0; i < d; ++i) ((mask >> i) & 1u ? fixed_axes : free_axes).push_back(static_cast<std::size_t>(i));

        std::size_t free_count = 1;
        for (std::size_t k = 0; k < free_axes.size(); ++k) free_count *= n;
        for (std::size_t f = 0; f < free_count; ++f) {
            for (unsigned side = 0; side < (1u << fixed_axes.size()); ++side) {
                std::vector<std::size_t> pos(static_cast<std::size_t>(d));
                std::size_t r = f;
                for (std::size_t a : free_axes) {
                    pos[a] = r % n;
                    r /= n;
                    x[a] = node(spec, static_cast<int>(a), pos[a] + 1);
                }
                for (std::size_t k = 0; k < fixed_axes.size(); ++k) {
                    const std::size_t a = fixed_axes[k];
                    const bool upper = (side >> k) & 1u;
                    pos[a] = upper ? n - 1 : 0;
                    x[a] = node(spec, static_cast<int>(a), upper ? n + 1 : 0);
                }
                std::size_t idx = 0;
                for (int i = d - 1; i >= 0; --i) idx = idx * n + pos[static_cast<std::size_t>(i)];
                data(static_cast<Eigen::Index>(idx)) += spec.source(x, t);
            }
        }

        std::vector<Eigen::MatrixXd> factors;
        for (int i = 0; i < d; ++i) {
            const double a = spec.alphas[static_cast<std::size_t>(i)];
            const auto nn = static_cast<Eigen::Index>(n);
            factors.push_back((mask >> i) & 1u ? Eigen::MatrixXd(a / 24.0 * Eigen::MatrixXd::Identity(nn, nn))
                                               : compact_H(a, n));
        }
        total += axis_kron(factors) * data;
    }
    return total;
}

Eigen::VectorXd rhs(const ProblemSpec& spec, std::size_t m, std::span<const double> u)
{
    if (u.size() != total_size(spec)) throw DimensionError("oracle::rhs: state length mismatch");
    const Eigen::Map<const Eigen::VectorXd> um(u.data(), static_cast<Eigen::Index>(u.size()));
    const Eigen::MatrixXd h = H_full(spec);
    const Eigen::VectorXd e = E_half(spec, m);
    const Eigen::VectorXd b = h * (e.asDiagonal() * um) - S_alpha(spec) * um + spec.time_step() * boundary_source(spec, m);
    return h.partialPivLu().solve(b);
}

} // namespace rsfde::oracle
