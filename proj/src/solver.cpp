#include "rsfde/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <optional>
#include <cmath>
#include <sstream>

#include "rsfde/errors.hpp"

namespace rsfde {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& a)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectrum_dump: eigensolver failed");
    std::vector<std::complex<double>> v(es.eigenvalues().data(), es.eigenvalues().data() + a.rows());
    std::sort(v.begin(), v.end(), [](auto l, auto r) {
        return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
    });
    return v;
}

} // namespace

std::string describe(const ProblemSpec& spec)
{
    std::ostringstream os;
    os << (spec.label.empty() ? "custom" : spec.label) << " d=" << spec.dim << " N=" << spec.n
       << " M=" << spec.time_steps << " T=" << spec.final_time << " alpha=";
    for (std::size_t i = 0; i < spec.alphas.size(); ++i) os << (i ? "," : "") << spec.alphas[i];
    os << " kappa=";
    for (std::size_t i = 0; i < spec.kappas.size(); ++i) os << (i ? "," : "") << spec.kappas[i];
    return os.str();
}

SolveReport time_march(const ProblemSpec& spec, const GmresConfig& cfg, const MarchOptions& opts)
{
    cfg.validate();
    const auto t_setup = Clock::now();
    SolveReport report;
    report.summary = describe(spec) + " mode=" + to_string(cfg.mode);

    Discretization state(spec);
    if (!spec.source) throw ConfigurationError("time_march: problem has no source function");
    report.e_bounds = compute_e_bar(spec, opts.e_bar_time_stride);
    std::optional<PrecondSpectrum> precond;
    if (cfg.mode != PrecondMode::none) precond = build_precond(state, report.e_bounds.e_bar);

    const auto t_loop = Clock::now();
    std::size_t total_iterations = 0;
    for (std::size_t m = 0; m < spec.time_steps; ++m) {
        const auto t_step = Clock::now();
        const std::vector<double> rhs = state.build_rhs(m);
        LinearOperator op = [&state, m](std::span<const double> x, std::span<double> y) {
            state.apply_A_tilde(m, x, y);
        };
        KrylovResult res = solve(op, rhs, state.solution(), cfg, precond ? &*precond : nullptr);
        total_iterations += res.iterations;
        if (opts.keep_histories) report.residual_histories.push_back(res.residual_history);
        state.set_solution(std::move(res.solution));
        report.per_step.push_back(
            StepStats{res.iterations, res.relative_residual(), res.converged, seconds_since(t_step)});
        if (!res.converged && opts.abort_on_nonconvergence) {
            report.completed = false;
            break;
        }
    }
    report.wall_seconds = seconds_since(t_loop);

    if (!report.per_step.empty()) {
        report.mean_iterations = static_cast<double>(total_iterations) / static_cast<double>(report.per_step.size());
    }
    report.solution.assign(state.solution().begin(), state.solution().end());
    if (spec.exact && report.completed) {
        const std::vector<double> exact = state.sample(spec.exact, spec.final_time);
        double s = 0.0, mx = 0.0;
        for (std::size_t k = 0; k < exact.size(); ++k) {
            const double d = exact[k] - report.solution[k];
            s += d * d;
            mx = std::max(mx, std::abs(d));
        }
        double cell = 1.0;
        for (int i = 0; i < spec.dim; ++i) cell *= spec.mesh_width(static_cast<std::size_t>(i));
        report.error_l2 = std::sqrt(s);
        report.error_max = mx;
        report.error_weighted = std::sqrt(s * cell);
    }
    report.wall_seconds_inclusive = seconds_since(t_setup);
    return report;
}

SpectrumDump spectrum_dump(const ProblemSpec& spec, std::size_t m)
{
    Discretization state(spec);
    const std::size_t n = state.size();
    if (n > kDenseSpectrumCap) {
        throw ConfigurationError("spectrum_dump: " + std::to_string(n) + " unknowns exceed the dense cap of " +
                                 std::to_string(kDenseSpectrumCap) + "; reduce N or the dimension");
    }
    if (m >= spec.time_steps) throw DimensionError("spectrum_dump: time index out of range");
    const CoefficientBounds eb = compute_e_bar(spec);
    const PrecondSpectrum p = build_precond(state, eb.e_bar);

    Eigen::MatrixXd a(n, n), pa(n, n);
    std::vector<double> unit(n, 0.0), col(n), pcol(n);
    for (std::size_t j = 0; j < n; ++j) {
        unit[j] = 1.0;
        state.apply_A_tilde(m, unit, col);
        apply_P_power(p, -1.0, col, pcol);
        unit[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a(i, j) = col[i];
            pa(i, j) = pcol[i];
        }
    }
    return SpectrumDump{sorted_eigenvalues(a), sorted_eigenvalues(pa)};
}

double spectrum_diameter(const std::vector<std::complex<double>>& eigs)
{
    double d = 0.0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        for (std::size_t j = i + 1; j < eigs.size(); ++j) d = std::max(d, std::abs(eigs[i] - eigs[j]));
    }
    return d;
}

} // namespace rsfde
