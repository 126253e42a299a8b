#include "rsfde/validation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "rsfde/errors.hpp"
#include "rsfde/oracles.hpp"
#include "rsfde/preconditioner.hpp"
#include "rsfde/presets.hpp"

namespace rsfde {

namespace {

const double kSqrt6 = std::sqrt(6.0);

double rel(const Eigen::VectorXd& got, const Eigen::VectorXd& want)
{
    const double d = want.norm();
    return d == 0.0 ? (got - want).norm() : (got - want).norm() / d;
}

Eigen::VectorXd random_vector(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = u(rng);
    return v;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(std::span<const double> v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::size_t unknowns(const ProblemSpec& spec)
{
    std::size_t s = 1;
    for (int i = 0; i < spec.dim; ++i) s *= spec.n;
    return s;
}

/// Greedy nearest matching; tolerant of conjugate pairs sorted differently.
double spectrum_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b)
{
    std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index arg = -1;
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double d = std::abs(a(i) - b(j));
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        if (arg >= 0) used[static_cast<std::size_t>(arg)] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

CheckResult upper_check(std::string name, double bound, double observed, std::string detail = {})
{
    return CheckResult{std::move(name), bound, observed, bound - observed, observed <= bound, std::move(detail)};
}

} // namespace

double theoretical_c(double e_hat, double e_check)
{
    if (!(e_check > 0.0) || e_check > e_hat) {
        throw std::invalid_argument("theoretical_c: need 0 < e_check <= e_hat");
    }
    const double s = e_hat + e_check;
    const double t1 = std::sqrt(1.0 - e_check * e_check / (e_hat * e_hat));
    const double t2 = std::sqrt(16.0 * kSqrt6 / ((4.0 + kSqrt6) * (4.0 + kSqrt6)));
    const double t3 = std::sqrt(1.0 - s * s * (11.0 - 4.0 * kSqrt6) / (32.0 * e_hat * e_hat));
    const double t4 = std::sqrt(1.0 - 32.0 * e_check * e_check / ((11.0 + 4.0 * kSqrt6) * s * s));
    return std::max({t1, t2, t3, t4});
}

double rho_theta(double theta)
{
    if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) {
        throw std::domain_error("rho_theta: theta must lie in (0, pi/2)");
    }
    const double rho = 2.0 * std::sin(theta / (4.0 - 2.0 * theta / std::numbers::pi));
    if (!(rho < std::sin(theta))) throw std::logic_error("rho_theta: rho >= sin(theta)");
    return rho;
}

Envelope range_envelope(double e_hat, double e_check)
{
    const double s = e_hat + e_check;
    return Envelope{std::min(2.0 * e_check / s, (4.0 - kSqrt6) / 4.0), std::max(2.0 * e_hat / s, (4.0 + kSqrt6) / 4.0)};
}

RangeProbe numerical_range_probe(const ProblemSpec& spec, std::size_t m, const ProbeOptions& opts)
{
    spec.validate();
    const std::size_t n = unknowns(spec);
    if (n > 4096) throw ConfigurationError("numerical_range_probe: more than 4096 unknowns; reduce N");
    const CoefficientBounds eb = compute_e_bar(spec);
    const Eigen::MatrixXd pm = oracle::spd_power(oracle::preconditioner(spec, eb.e_bar), -0.5);
    const Eigen::MatrixXd a = pm * oracle::A_tilde(spec, m) * pm;
    const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();

    RangeProbe probe;
    probe.envelope = range_envelope(eb.e_hat, eb.e_check);
    probe.v_min = std::numeric_limits<double>::infinity();

    auto record = [&](const Eigen::VectorXcd& y, const std::string& label) {
        const std::complex<double> q = y.dot(ac * y) / y.squaredNorm();
        probe.samples.push_back(q);
        const double r = std::abs(q);
        probe.v_min = std::min(probe.v_min, r);
        probe.r_max = std::max(probe.r_max, r);
        if (!probe.envelope.contains(r)) {
            if (probe.violations == 0) {
                std::ostringstream os;
                os << label << ": |y*Ay/y*y| = " << r << " outside [" << probe.envelope.lower << ", "
                   << probe.envelope.upper << "]";
                probe.first_violation = os.str();
            }
            ++probe.violations;
        }
    };

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> g;
    Eigen::VectorXcd y(static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < opts.samples; ++s) {
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = {g(rng), g(rng)};
        record(y / y.norm(), "random vector #" + std::to_string(s));
    }
    if (opts.include_eigenvectors) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(a);
        for (Eigen::Index k = 0; k < es.eigenvectors().cols(); ++k) {
            record(es.eigenvectors().col(k), "eigenvector #" + std::to_string(k));
        }
    }
    probe.theta = std::acos(std::clamp(probe.v_min / probe.r_max, -1.0, 1.0));
    if (probe.violations > 0 && opts.throw_on_violation) throw ValidationFailure(probe.first_violation);
    return probe;
}

AuditResult residual_bound_audit(std::span<const double> history, double c)
{
    AuditResult out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    if (history.empty() || history.front() == 0.0) {
        out.worst_margin = 0.0;
        return out;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
        const double bound = (2.0 + c) * std::pow(c, static_cast<double>(k));
        const double margin = bound - history[k] / history.front();
        ++out.checks;
        if (margin < out.worst_margin) {
            out.worst_margin = margin;
            out.worst_k = k;
        }
    }
    out.pass = out.worst_margin >= 0.0;
    return out;
}

AuditResult residual_bound_audit(const KrylovResult& result, double c)
{
    return residual_bound_audit(result.residual_history, c);
}

AuditResult one_two_sided_audit(std::span<const double> one_sided, std::span<const double> two_sided, double e_bar,
                                double slack)
{
    AuditResult out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    const std::size_t len = std::min(one_sided.size(), two_sided.size());
    const double f = 1.0 / std::sqrt(e_bar);
    for (std::size_t j = 0; j < len; ++j) {
        const double margin = f * two_sided[j] + slack - one_sided[j];
        ++out.checks;
        if (margin < out.worst_margin) {
            out.worst_margin = margin;
            out.worst_k = j;
        }
    }
    if (out.checks == 0) out.worst_margin = 0.0;
    out.pass = out.worst_margin >= 0.0;
    return out;
}

namespace {

void merge(AuditResult& into, const AuditResult& a, std::size_t step)
{
    if (into.checks == 0 || a.worst_margin < into.worst_margin) {
        into.worst_margin = a.worst_margin;
        into.worst_k = step;
    }
    into.checks += a.checks;
    into.pass = into.pass && a.pass;
}

} // namespace

MarchAudit audit_time_march(const ProblemSpec& spec, const GmresConfig& cfg, std::size_t max_steps)
{
    Discretization state(spec);
    const CoefficientBounds eb = compute_e_bar(spec);
    const PrecondSpectrum p = build_precond(state, eb.e_bar);
    MarchAudit audit;
    audit.e_bar = eb.e_bar;
    audit.c = theoretical_c(eb.e_hat, eb.e_check);

    GmresConfig one = cfg, two = cfg;
    one.mode = PrecondMode::one_sided;
    two.mode = PrecondMode::two_sided;
    const std::size_t steps = max_steps == 0 ? spec.time_steps : std::min(max_steps, spec.time_steps);
    for (std::size_t m = 0; m < steps; ++m) {
        const std::vector<double> b = state.build_rhs(m);
        LinearOperator op = [&state, m](std::span<const double> x, std::span<double> y) {
            state.apply_A_tilde(m, x, y);
        };
        const KrylovResult r1 = solve(op, b, state.solution(), one, &p);
        const KrylovResult r2 = solve(op, b, state.solution(), two, &p);
        merge(audit.one_two_sided, one_two_sided_audit(r1.residual_history, r2.residual_history, eb.e_bar), m);
        merge(audit.contraction, residual_bound_audit(r2, audit.c), m);
        state.set_solution(r1.solution);
        ++audit.steps;
    }
    return audit;
}

CheckResult check_stencil_properties(const FcdStencil& s, double sum_limit)
{
    CheckResult r;
    r.name = "fcd_coefficients";
    r.bound = sum_limit;
    if (s.coeffs.empty()) {
        r.detail = "empty stencil";
        return r;
    }
    std::ostringstream why;
    bool ok = s.coeffs[0] > 0.0;
    if (!ok) why << "s_0 = " << s.coeffs[0] << " not positive; ";
    double sum = s.coeffs[0];
    for (std::size_t k = 1; k < s.coeffs.size(); ++k) {
        if (!(s.coeffs[k] < 0.0) && !(s.alpha == 2.0 && k >= 2 && s.coeffs[k] == 0.0)) {
            if (ok) why << "s_" << k << " = " << s.coeffs[k] << " not negative; ";
            ok = false;
        }
        sum += 2.0 * s.coeffs[k];
    }
    r.observed = sum;
    const bool sum_ok = s.alpha == 2.0 ? sum == 0.0 : (sum > 0.0 && sum < sum_limit);
    if (!sum_ok) why << "partial sum " << sum << " outside (0, " << sum_limit << "); ";
    r.margin = std::min(sum, sum_limit - sum);
    r.pass = ok && sum_ok;
    r.detail = why.str();
    return r;
}

double tau_algebra_defect(double alpha, std::size_t n)
{
    const FcdStencil st = fcd_coefficients(alpha, n);
    const Eigen::MatrixXd t = oracle::toeplitz(st.coeffs);
    // fast-path eigenvalues pushed through the dense sine matrix
    const TauOperator tau = tau_from_toeplitz(st.coeffs);
    const Eigen::VectorXd q = to_eigen(tau.eigenvalues());
    const Eigen::MatrixXd s = oracle::sine_matrix(n);
    const Eigen::MatrixXd lhs = s * q.asDiagonal() * s;
    return (lhs - (t - oracle::hankel_part(st.coeffs))).norm() / t.norm();
}

double hankel_relative_norm(double alpha, std::size_t n)
{
    const std::vector<double> t = oracle::fcd_column(alpha, n);
    const Eigen::MatrixXd s = oracle::sine_matrix(n);
    const Eigen::VectorXd q = oracle::tau_eigenvalues(t);
    const Eigen::MatrixXd half = s * q.array().rsqrt().matrix().asDiagonal() * s;
    const Eigen::MatrixXd m = half * oracle::hankel_part(t) * half;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((m + m.transpose()) / 2.0, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double kronecker_eigen_defect(std::size_t na, std::size_t nb, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto sym = [&](std::size_t n) {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < a.cols(); ++j) a.col(j) = random_vector(n, rng);
        return Eigen::MatrixXd((a + a.transpose()) / 2.0);
    };
    const Eigen::MatrixXd a = sym(na), b = sym(nb);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a), eb(b), ek(oracle::kron(a, b));
    std::vector<double> prod;
    for (Eigen::Index i = 0; i < ea.eigenvalues().size(); ++i) {
        for (Eigen::Index j = 0; j < eb.eigenvalues().size(); ++j) prod.push_back(ea.eigenvalues()(i) * eb.eigenvalues()(j));
    }
    std::sort(prod.begin(), prod.end());
    const Eigen::VectorXd k = ek.eigenvalues();
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < prod.size(); ++i) {
        scale = std::max(scale, std::abs(prod[i]));
        worst = std::max(worst, std::abs(prod[i] - k(static_cast<Eigen::Index>(i))));
    }
    return scale == 0.0 ? worst : worst / scale;
}

double mediant_violation(std::size_t trials, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(1e-3, 10.0);
    std::uniform_int_distribution<int> len(1, 12);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const int n = len(rng);
        double sa = 0.0, sb = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = u(rng), b = u(rng);
            sa += a;
            sb += b;
            lo = std::min(lo, a / b);
            hi = std::max(hi, a / b);
        }
        const double med = sa / sb;
        const double tol = 4.0 * std::numeric_limits<double>::epsilon() * hi;
        worst = std::max({worst, lo - med - tol, med - hi - tol});
    }
    return worst;
}

OperatorDefects operator_defects(const ProblemSpec& spec, std::size_t m, std::uint64_t seed)
{
    Discretization state(spec);
    const std::size_t n = state.size();
    std::mt19937_64 rng(seed);
    const Eigen::VectorXd x = random_vector(n, rng);
    const Eigen::VectorXd u = random_vector(n, rng);
    const std::vector<double> xs = to_std(x);
    std::vector<double> y(n);
    OperatorDefects d;

    const Eigen::MatrixXd a = oracle::A_tilde(spec, m);
    const Eigen::VectorXd ax = a * x;
    state.apply_A_tilde(m, xs, y);
    d.a_tilde = rel(to_eigen(y), ax);
    state.apply_A_tilde_unsimplified(m, xs, y);
    d.a_tilde_unsimplified = rel(to_eigen(y), ax);

    state.set_solution(to_std(u));
    d.rhs = rel(to_eigen(state.build_rhs(m)), oracle::rhs(spec, m, to_std(u)));

    const CoefficientBounds eb = compute_e_bar(spec);
    const PrecondSpectrum p = build_precond(state, eb.e_bar);
    const Eigen::MatrixXd pd = oracle::preconditioner(spec, eb.e_bar);
    d.p_inv = rel(to_eigen(apply_P_inv(p, xs)), pd.ldlt().solve(x));
    d.p_inv_sqrt = rel(to_eigen(apply_P_inv_sqrt(p, xs)), oracle::spd_power(pd, -0.5) * x);
    return d;
}

double similarity_defect(const ProblemSpec& spec, std::size_t m)
{
    const CoefficientBounds eb = compute_e_bar(spec);
    const Eigen::MatrixXd p = oracle::preconditioner(spec, eb.e_bar);
    const Eigen::MatrixXd a = oracle::A_tilde(spec, m);
    const Eigen::MatrixXd pm = oracle::spd_power(p, -0.5);
    const Eigen::VectorXcd l1 = Eigen::EigenSolver<Eigen::MatrixXd>(p.ldlt().solve(a), false).eigenvalues();
    const Eigen::VectorXcd l2 = Eigen::EigenSolver<Eigen::MatrixXd>(pm * a * pm, false).eigenvalues();
    return spectrum_distance(l1, l2) / l1.cwiseAbs().maxCoeff();
}

std::vector<CheckResult> run_validation_suite(const ValidationOptions& opts)
{
    std::vector<CheckResult> out;
    auto fmt = [](const char* f, double a, double b) {
        char buf[128];
        std::snprintf(buf, sizeof buf, f, a, b);
        return std::string(buf);
    };

    {
        double worst = 0.0;
        std::string where;
        for (double a : opts.alphas) {
            for (std::size_t n : opts.sizes) {
                const double d = tau_algebra_defect(a, n);
                if (d >= worst) {
                    worst = d;
                    where = fmt("alpha=%.2f n=%.0f", a, static_cast<double>(n));
                }
            }
        }
        out.push_back(upper_check("tau_algebra_identity", 1e-12, worst, "worst at " + where));
    }

    {
        CheckResult agg{"fcd_coefficients", 1e-2, 0.0, std::numeric_limits<double>::infinity(), true, {}};
        for (double a : opts.alphas) {
            FcdStencil st = fcd_coefficients(a, 4096);
            if (opts.inject_stencil_fault) st.coeffs[1] = std::abs(st.coeffs[1]);
            const CheckResult r = check_stencil_properties(st);
            agg.observed = std::max(agg.observed, r.observed);
            agg.margin = std::min(agg.margin, r.margin);
            if (!r.pass) {
                agg.pass = false;
                agg.detail += fmt("alpha=%.2f: ", a, 0.0) + r.detail;
            }
        }
        const FcdStencil two = fcd_coefficients(2.0, 8);
        const bool exact = two.coeffs[0] == 2.0 && two.coeffs[1] == -1.0 &&
                           std::all_of(two.coeffs.begin() + 2, two.coeffs.end(), [](double v) { return v == 0.0; });
        if (!exact) {
            agg.pass = false;
            agg.detail += "alpha=2 stencil is not [2, -1, 0, ...]; ";
        }
        out.push_back(agg);
    }

    {
        double worst = 0.0;
        std::string where;
        for (double a : opts.alphas) {
            for (std::size_t n : opts.sizes) {
                if (n > 128) continue;
                const double v = hankel_relative_norm(a, n);
                if (v >= worst) {
                    worst = v;
                    where = fmt("alpha=%.2f n=%.0f", a, static_cast<double>(n));
                }
            }
        }
        CheckResult r = upper_check("hankel_relative_norm", 0.5, worst, "worst at " + where);
        r.pass = worst < 0.5;
        out.push_back(r);
    }

    {
        double lo = 1.0, hi = 0.0, cond = 0.0;
        for (double a : opts.alphas) {
            for (std::size_t n : {std::size_t{8}, std::size_t{64}, std::size_t{1024}}) {
                const std::vector<double> l = h_eigenvalues(TridiagH{a, n});
                const auto [mn, mx] = std::minmax_element(l.begin(), l.end());
                lo = std::min(lo, *mn);
                hi = std::max(hi, *mx);
                cond = std::max(cond, std::sqrt(*mx / *mn));
            }
        }
        CheckResult r = upper_check("compact_operator_condition", kSqrt6 / 2.0 + 1e-12, cond,
                                    fmt("eigenvalues in [%.6f, %.6f]", lo, hi));
        r.pass = r.pass && lo > 2.0 / 3.0 && hi < 1.0;
        out.push_back(r);
    }

    out.push_back(upper_check("mediant_inequality", 0.0, mediant_violation(1000, opts.seed)));
    out.push_back(upper_check("kronecker_eigenvalues", 1e-12, kronecker_eigen_defect(5, 7, opts.seed)));

    const std::vector<std::vector<double>> alpha_sets{{1.5}, {1.5, 1.7}, {1.5, 1.7, 1.9}};
    const Preset presets[] = {Preset::ex1, Preset::ex2, Preset::ex3};
    for (int d = 0; d < 3; ++d) {
        const ProblemSpec spec = make_preset(presets[d], 8, 16, alpha_sets[static_cast<std::size_t>(d)]);
        const OperatorDefects od = operator_defects(spec, 3, opts.seed);
        const double worst = std::max({od.a_tilde, od.a_tilde_unsimplified, od.rhs, od.p_inv, od.p_inv_sqrt});
        char detail[200];
        std::snprintf(detail, sizeof detail, "A=%.2e A_ref=%.2e rhs=%.2e Pinv=%.2e Pinvsqrt=%.2e", od.a_tilde,
                      od.a_tilde_unsimplified, od.rhs, od.p_inv, od.p_inv_sqrt);
        out.push_back(upper_check("operator_equivalence_d" + std::to_string(d + 1), 1e-11, worst, detail));
    }

    const ProblemSpec probe = make_preset(Preset::ex1, opts.probe_n, opts.probe_time_steps, {1.5});
    out.push_back(upper_check("similarity_spectra", 1e-9, similarity_defect(probe, 0)));

    {
        ProbeOptions po;
        po.samples = opts.probe_samples;
        po.seed = opts.seed;
        po.throw_on_violation = false;
        const RangeProbe rp = numerical_range_probe(probe, 0, po);
        CheckResult r{"numerical_range_envelope",
                      rp.envelope.upper,
                      rp.r_max,
                      std::min(rp.v_min - rp.envelope.lower, rp.envelope.upper - rp.r_max),
                      rp.violations == 0,
                      fmt("v_min=%.4f lower=%.4f", rp.v_min, rp.envelope.lower) +
                          (rp.violations ? "; " + rp.first_violation : std::string{})};
        out.push_back(r);
    }

    {
        const MarchAudit ma = audit_time_march(probe, default_gmres_config(1), opts.audit_steps);
        CheckResult r{"one_vs_two_sided_residuals", 0.0, -ma.one_two_sided.worst_margin,
                      ma.one_two_sided.worst_margin, ma.one_two_sided.pass,
                      fmt("e_bar=%.4f steps=%.0f", ma.e_bar, static_cast<double>(ma.steps))};
        out.push_back(r);
        CheckResult c{"two_sided_contraction", 0.0, -ma.contraction.worst_margin, ma.contraction.worst_margin,
                      ma.contraction.pass, fmt("c=%.6f worst step=%.0f", ma.c, static_cast<double>(ma.contraction.worst_k))};
        out.push_back(c);
    }

    {
        double worst = -1.0;
        bool ok = true;
        for (int i = 1; i <= 100; ++i) {
            const double th = (std::numbers::pi / 2.0) * i / 101.0;
            try {
                worst = std::max(worst, rho_theta(th) - std::sin(th));
            } catch (const std::logic_error&) {
                ok = false;
            }
        }
        CheckResult r = upper_check("rho_below_sin", 0.0, worst);
        r.pass = ok && worst < 0.0;
        out.push_back(r);
    }

    {
        double worst = 0.0;
        for (int i = 0; i <= 90; ++i) {
            const double ratio = 1.0 + 9.0 * i / 90.0;
            worst = std::max(worst, theoretical_c(ratio, 1.0));
        }
        CheckResult r = upper_check("contraction_constant_below_one", 1.0, worst, "e_hat/e_check in [1, 10]");
        r.pass = worst < 1.0;
        out.push_back(r);
    }
    return out;
}

std::string format_report(const std::vector<CheckResult>& checks, bool verbose)
{
    std::string s;
    char line[256];
    for (const CheckResult& c : checks) {
        std::snprintf(line, sizeof line, "%-32s bound=%-12.5e observed=%-12.5e margin=%-12.4e %s\n", c.name.c_str(),
                      c.bound, c.observed, c.margin, c.pass ? "PASS" : "FAIL");
        s += line;
        if ((verbose || !c.pass) && !c.detail.empty()) s += "    " + c.detail + "\n";
    }
    return s;
}

bool all_passed(const std::vector<CheckResult>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

} // namespace rsfde
