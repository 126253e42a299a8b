#ifndef RSFDE_VALIDATION_HPP
#define RSFDE_VALIDATION_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "rsfde/discretization.hpp"
#include "rsfde/krylov.hpp"
#include "rsfde/structured.hpp"

namespace rsfde {

/// Convergence constant of the two-sided iteration:
///   c = max{ sqrt(1 - ec^2/eh^2), sqrt(16 sqrt6 / (4+sqrt6)^2),
///            sqrt(1 - (eh+ec)^2 (11 - 4 sqrt6) / (32 eh^2)),
///            sqrt(1 - 32 ec^2 / ((11 + 4 sqrt6)(eh+ec)^2)) }.
/// Throws std::invalid_argument unless 0 < e_check <= e_hat.
double theoretical_c(double e_hat, double e_check);

/// 2 sin(theta / (4 - 2 theta / pi)); throws std::domain_error outside
/// (0, pi/2) and std::logic_error if the result is not below sin(theta).
double rho_theta(double theta);

struct Envelope {
    double lower = 0.0;
    double upper = 0.0;
    bool contains(double v) const noexcept { return v >= lower && v <= upper; }
};

/// [min{2ec/(eh+ec), (4-sqrt6)/4}, max{2eh/(eh+ec), (4+sqrt6)/4}]
Envelope range_envelope(double e_hat, double e_check);

class ValidationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rayleigh quotients y* A y / y* y of the two-sided matrix
/// A = P^{-1/2} A_tilde P^{-1/2}.
struct RangeProbe {
    std::vector<std::complex<double>> samples;
    double v_min = 0.0;
    double r_max = 0.0;
    double theta = 0.0;
    Envelope envelope;
    std::size_t violations = 0;
    std::string first_violation;
};

struct ProbeOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 20240917;
    bool include_eigenvectors = true;
    bool throw_on_violation = true;
};

/// Dense probe; requires N^d <= 4096. Throws ValidationFailure naming the
/// first offending vector when a modulus leaves the envelope (unless
/// disabled, in which case the count is recorded).
RangeProbe numerical_range_probe(const ProblemSpec& spec, std::size_t m, const ProbeOptions& opts = {});

struct AuditResult {
    bool pass = true;
    /// min_k (bound_k - observed_k); negative on failure.
    double worst_margin = 0.0;
    std::size_t worst_k = 0;
    std::size_t checks = 0;
};

/// ||r_k|| / ||r_0|| <= (2 + c) c^k for every k in the history.
AuditResult residual_bound_audit(std::span<const double> history, double c);
AuditResult residual_bound_audit(const KrylovResult& result, double c);

/// ||r_j|| <= ||r~_j|| / sqrt(e_bar) + slack for the common prefix of a
/// one-sided (r) and two-sided (r~) history.
AuditResult one_two_sided_audit(std::span<const double> one_sided, std::span<const double> two_sided, double e_bar,
                                double slack = 1e-12);

/// Marches the problem with one-sided GMRES and, at every step, also solves the
/// same system two-sided from the matched start, auditing each iteration.
struct MarchAudit {
    AuditResult one_two_sided;
    AuditResult contraction;
    double e_bar = 0.0;
    double c = 0.0;
    std::size_t steps = 0;
};
MarchAudit audit_time_march(const ProblemSpec& spec, const GmresConfig& cfg, std::size_t max_steps = 0);

/// One line of the validation report.
struct CheckResult {
    std::string name;
    double bound = 0.0;
    double observed = 0.0;
    double margin = 0.0;
    bool pass = false;
    std::string detail;
};

/// s_0 > 0, s_k < 0 for k >= 1, 0 < s_0 + 2 sum s_k < limit.
CheckResult check_stencil_properties(const FcdStencil& s, double sum_limit = 1e-2);

/// ||S diag(q) S - (T - H(T))||_F / ||T||_F for the FCD Toeplitz matrix.
double tau_algebra_defect(double alpha, std::size_t n);
/// ||tau(T)^{-1/2} H(T) tau(T)^{-1/2}||_2, dense.
double hankel_relative_norm(double alpha, std::size_t n);
/// Largest relative deviation between the eigenvalues of A x B and the
/// pairwise products of the factor eigenvalues, for random symmetric factors.
double kronecker_eigen_defect(std::size_t na, std::size_t nb, std::uint64_t seed);
/// Largest violation of min a_i/b_i <= sum a / sum b <= max a_i/b_i over
/// random positive trials (0 when the inequality holds).
double mediant_violation(std::size_t trials, std::uint64_t seed);

struct OperatorDefects {
    double a_tilde = 0.0;
    double a_tilde_unsimplified = 0.0;
    double rhs = 0.0;
    double p_inv = 0.0;
    double p_inv_sqrt = 0.0;
};
/// Relative defects of the matrix-free operators against the dense oracles
/// on a deterministic pseudo-random state.
OperatorDefects operator_defects(const ProblemSpec& spec, std::size_t m, std::uint64_t seed = 7);

/// Max distance between sorted spectra of P^{-1} A and P^{-1/2} A P^{-1/2},
/// relative to the spectral radius.
double similarity_defect(const ProblemSpec& spec, std::size_t m);

struct ValidationOptions {
    std::vector<double> alphas{1.1, 1.3, 1.5, 1.7, 1.9};
    std::vector<std::size_t> sizes{8, 16, 32, 64};
    std::size_t probe_samples = 10000;
    std::size_t probe_n = 15;
    std::size_t probe_time_steps = 4096;
    std::size_t audit_steps = 64;
    std::uint64_t seed = 20240917;
    /// Flip s_1 positive before the stencil check (negative test).
    bool inject_stencil_fault = false;
};

std::vector<CheckResult> run_validation_suite(const ValidationOptions& opts);
/// One line per check: name, bound, observed, margin, PASS/FAIL; with verbose
/// the detail string follows.
std::string format_report(const std::vector<CheckResult>& checks, bool verbose = false);
bool all_passed(const std::vector<CheckResult>& checks);

} // namespace rsfde

#endif
