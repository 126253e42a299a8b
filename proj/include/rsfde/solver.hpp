#ifndef RSFDE_SOLVER_HPP
#define RSFDE_SOLVER_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "rsfde/discretization.hpp"
#include "rsfde/krylov.hpp"
#include "rsfde/preconditioner.hpp"

namespace rsfde {

struct StepStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = true;
    /// Right-hand side assembly plus the GMRES solve.
    double seconds = 0.0;
};

struct MarchOptions {
    /// Stop at the first step whose GMRES run did not converge.
    bool abort_on_nonconvergence = true;
    /// Keep every step's residual history in the report.
    bool keep_histories = false;
    /// Stride for the e_bar time scan (1 = exhaustive).
    std::size_t e_bar_time_stride = 1;
};

struct SolveReport {
    std::vector<StepStats> per_step;
    double mean_iterations = 0.0;
    /// ||u* - u||_2 over the interior grid at t = T; -1 when no exact solution.
    double error_l2 = -1.0;
    double error_max = -1.0;
    /// error_l2 scaled by sqrt(prod h_i).
    double error_weighted = -1.0;
    /// Time loop only (operators, plans and preconditioner built beforehand).
    double wall_seconds = 0.0;
    /// Everything, including setup.
    double wall_seconds_inclusive = 0.0;
    /// False when the march stopped early on a non-converged step.
    bool completed = true;
    CoefficientBounds e_bounds;
    std::vector<double> solution;
    std::vector<std::vector<double>> residual_histories;
    std::string summary;
};

/// Crank-Nicolson march from u^0 = psi over M steps, one GMRES solve per step
/// warm-started from the previous level.
SolveReport time_march(const ProblemSpec& spec, const GmresConfig& cfg, const MarchOptions& opts = {});

/// Largest system order spectrum_dump will assemble densely.
inline constexpr std::size_t kDenseSpectrumCap = 4096;

struct SpectrumDump {
    std::vector<std::complex<double>> a_tilde;
    std::vector<std::complex<double>> preconditioned;
};

/// Eigenvalues of A~^{(m)} and P^{-1} A~^{(m)}, each sorted by real part then
/// imaginary part. Throws ConfigurationError above kDenseSpectrumCap unknowns.
SpectrumDump spectrum_dump(const ProblemSpec& spec, std::size_t m = 0);

/// Cloud diameter max |l_i - l_j|.
double spectrum_diameter(const std::vector<std::complex<double>>& eigs);

std::string describe(const ProblemSpec& spec);

} // namespace rsfde

#endif
