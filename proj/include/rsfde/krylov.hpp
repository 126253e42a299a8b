#ifndef RSFDE_KRYLOV_HPP
#define RSFDE_KRYLOV_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsfde/preconditioner.hpp"

namespace rsfde {

/// y = A x for a fixed linear map; x and y never alias.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

enum class PrecondMode { none, one_sided, two_sided };

std::string to_string(PrecondMode mode);
PrecondMode parse_precond_mode(const std::string& text);

struct GmresConfig {
    double tol = 1e-9;           ///< stop when ||r_k|| <= tol ||r_0||
    std::size_t max_iter = 10;   ///< total inner iterations over all cycles
    std::optional<std::size_t> restart; ///< cycle length; none = full GMRES
    PrecondMode mode = PrecondMode::one_sided;

    void validate() const;
};

/// Caps of 10 / 100 / 200 iterations for d = 1 / 2 / 3, tol 1e-9.
GmresConfig default_gmres_config(int dim, PrecondMode mode = PrecondMode::one_sided);

struct KrylovResult {
    std::vector<double> solution;
    std::size_t iterations = 0;
    /// ||r_k|| of the system GMRES actually iterated on, k = 0..iterations.
    std::vector<double> residual_history;
    bool converged = false;
    /// ||b - A x|| recomputed explicitly for the returned iterate (same system).
    double final_residual = 0.0;

    double relative_residual() const
    {
        if (residual_history.empty() || residual_history.front() == 0.0) return 0.0;
        return residual_history.back() / residual_history.front();
    }
};

/// Restarted GMRES on A x = b: Arnoldi with modified Gram-Schmidt (a second
/// pass when the new vector keeps a component above 1e-8 along the basis),
/// Givens rotations for the Hessenberg least-squares problem. Running out of
/// iterations is reported through `converged`, not thrown.
KrylovResult gmres(const LinearOperator& op, std::span<const double> b, std::span<const double> x0,
                   const GmresConfig& cfg);

/// Solves A x = b in the mode of cfg:
///   none       GMRES on A x = b
///   one_sided  GMRES on P^{-1} A x = P^{-1} b
///   two_sided  GMRES on P^{-1/2} A P^{-1/2} z = P^{-1/2} b, x = P^{-1/2} z,
///              started from z_0 = P^{1/2} x0
/// The residual history belongs to the iterated system.
KrylovResult solve(const LinearOperator& op, std::span<const double> b, std::span<const double> x0,
                   const GmresConfig& cfg, const PrecondSpectrum* precond);

} // namespace rsfde

#endif
