#include "rsfde/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsfde/errors.hpp"

namespace rsfde {

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

std::vector<double> residual(const LinearOperator& op, std::span<const double> b, std::span<const double> x)
{
    std::vector<double> r(b.size());
    op(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return r;
}

constexpr double kReorthTolerance = 1e-8;

} // namespace

std::string to_string(PrecondMode mode)
{
    switch (mode) {
    case PrecondMode::none: return "none";
    case PrecondMode::one_sided: return "one";
    case PrecondMode::two_sided: return "two";
    }
    return "?";
}

PrecondMode parse_precond_mode(const std::string& text)
{
    if (text == "none" || text == "unpreconditioned") return PrecondMode::none;
    if (text == "one" || text == "one_sided") return PrecondMode::one_sided;
    if (text == "two" || text == "two_sided") return PrecondMode::two_sided;
    throw ConfigurationError("unknown preconditioning mode '" + text + "'");
}

void GmresConfig::validate() const
{
    if (!(tol > 0.0)) throw ConfigurationError("GmresConfig: tol must be positive");
    if (max_iter == 0) throw ConfigurationError("GmresConfig: max_iter must be at least 1");
    if (restart && *restart == 0) throw ConfigurationError("GmresConfig: restart length must be positive");
}

GmresConfig default_gmres_config(int dim, PrecondMode mode)
{
    GmresConfig cfg;
    cfg.mode = mode;
    cfg.max_iter = dim <= 1 ? 10 : (dim == 2 ? 100 : 200);
    return cfg;
}

KrylovResult gmres(const LinearOperator& op, std::span<const double> b, std::span<const double> x0,
                   const GmresConfig& cfg)
{
    cfg.validate();
    const std::size_t n = b.size();
    detail::require_size(x0.size(), n, "gmres initial guess");

    KrylovResult out;
    out.solution.assign(x0.begin(), x0.end());
    std::vector<double> r = residual(op, b, out.solution);
    double beta = norm2(r);
    out.residual_history.push_back(beta);
    if (beta == 0.0) {
        out.converged = true;
        return out;
    }
    const double target = cfg.tol * beta;

    bool done = false;
    while (!done && out.iterations < cfg.max_iter) {
        const std::size_t budget = cfg.max_iter - out.iterations;
        const std::size_t m = cfg.restart ? std::min(*cfg.restart, budget) : budget;

        std::vector<std::vector<double>> basis;
        basis.reserve(m + 1);
        basis.emplace_back(r);
        for (double& v : basis[0]) v /= beta;

        // Column j of the Hessenberg matrix, rotated in place into R.
        std::vector<std::vector<double>> hess;
        std::vector<double> cs, sn, g(m + 1, 0.0);
        g[0] = beta;
        std::size_t k = 0;

        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> w(n);
            op(basis[j], w);
            const double w_norm_in = norm2(w);
            std::vector<double> h(j + 2, 0.0);
            for (std::size_t i = 0; i <= j; ++i) {
                h[i] = dot(w, basis[i]);
                axpy(-h[i], basis[i], w);
            }
            double w_norm = norm2(w);
            double worst = 0.0;
            for (std::size_t i = 0; i <= j && w_norm > 0.0; ++i) {
                worst = std::max(worst, std::abs(dot(w, basis[i])) / w_norm);
            }
            if (worst > kReorthTolerance) {
                for (std::size_t i = 0; i <= j; ++i) {
                    const double c = dot(w, basis[i]);
                    h[i] += c;
                    axpy(-c, basis[i], w);
                }
                w_norm = norm2(w);
            }
            h[j + 1] = w_norm;

            for (std::size_t i = 0; i < j; ++i) {
                const double t = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            const double rho = std::hypot(h[j], h[j + 1]);
            const double c = rho == 0.0 ? 1.0 : h[j] / rho;
            const double s = rho == 0.0 ? 0.0 : h[j + 1] / rho;
            cs.push_back(c);
            sn.push_back(s);
            h[j] = rho;
            h[j + 1] = 0.0;
            g[j + 1] = -s * g[j];
            g[j] = c * g[j];
            hess.push_back(std::move(h));

            const double res = std::abs(g[j + 1]);
            out.residual_history.push_back(res);
            ++out.iterations;
            k = j + 1;

            // Lucky breakdown: A K_j is invariant, the iterate is exact.
            const bool breakdown = w_norm <= 1e-14 * std::max(w_norm_in, std::numeric_limits<double>::min());
            if (res <= target) out.converged = true;
            if (out.converged || breakdown) {
                done = true;
                break;
            }
            basis.emplace_back(std::move(w));
            for (double& v : basis.back()) v /= w_norm;
        }

        // Back substitution R y = g, then x += V y.
        std::vector<double> y(k, 0.0);
        for (std::size_t ii = k; ii-- > 0;) {
            double s = g[ii];
            for (std::size_t jj = ii + 1; jj < k; ++jj) s -= hess[jj][ii] * y[jj];
            y[ii] = hess[ii][ii] == 0.0 ? 0.0 : s / hess[ii][ii];
        }
        for (std::size_t jj = 0; jj < k; ++jj) axpy(y[jj], basis[jj], out.solution);

        if (!done && out.iterations < cfg.max_iter) {
            r = residual(op, b, out.solution);
            beta = norm2(r);
            if (beta <= target) done = out.converged = true;
        }
    }

    const std::vector<double> rf = residual(op, b, out.solution);
    out.final_residual = norm2(rf);
    return out;
}

KrylovResult solve(const LinearOperator& op, std::span<const double> b, std::span<const double> x0,
                   const GmresConfig& cfg, const PrecondSpectrum* precond)
{
    if (cfg.mode == PrecondMode::none) return gmres(op, b, x0, cfg);
    if (!precond) throw ConfigurationError("solve: preconditioned mode without a preconditioner");
    const std::size_t n = b.size();

    if (cfg.mode == PrecondMode::one_sided) {
        std::vector<double> tmp(n);
        LinearOperator left = [&](std::span<const double> x, std::span<double> y) {
            op(x, tmp);
            apply_P_power(*precond, -1.0, tmp, y);
        };
        const std::vector<double> pb = apply_P_inv(*precond, b);
        return gmres(left, pb, x0, cfg);
    }

    std::vector<double> t1(n), t2(n);
    LinearOperator split = [&](std::span<const double> x, std::span<double> y) {
        apply_P_power(*precond, -0.5, x, t1);
        op(t1, t2);
        apply_P_power(*precond, -0.5, t2, y);
    };
    const std::vector<double> pb = apply_P_inv_sqrt(*precond, b);
    const std::vector<double> z0 = apply_P_sqrt(*precond, x0);
    KrylovResult res = gmres(split, pb, z0, cfg);
    res.solution = apply_P_inv_sqrt(*precond, res.solution);
    return res;
}

} // namespace rsfde
