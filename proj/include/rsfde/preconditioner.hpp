#ifndef RSFDE_PRECONDITIONER_HPP
#define RSFDE_PRECONDITIONER_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rsfde/discretization.hpp"

namespace rsfde {

/// Extremes of e(x, t_{m+1/2}) over the interior grid and all half-time levels.
struct CoefficientBounds {
    double e_bar = 0.0;   ///< (e_hat + e_check) / 2
    double e_hat = 0.0;   ///< maximum
    double e_check = 0.0; ///< minimum
};

/// Exhaustive scan of e over grid x half-time levels. A time_stride > 1 visits
/// every stride-th level plus the last one, which is exact only when e is
/// monotone in t. Throws InvalidCoefficient if the minimum is not positive.
CoefficientBounds compute_e_bar(const ProblemSpec& spec, std::size_t time_stride = 1);

/// P = e_bar I + H^{-1/2} tau(S) H^{-1/2} in multilevel sine coordinates:
/// diag[k_1 + n k_2 + n^2 k_3] = e_bar + sum_i eta_i q_i(k_i) / lambda_i(k_i).
struct PrecondSpectrum {
    GridShape shape;
    double e_bar = 0.0;
    std::vector<double> diag;
    std::shared_ptr<const SineTransformPlan> plan;
};

PrecondSpectrum build_precond(const Discretization& state, double e_bar);

/// y = P^{power} x: multilevel DST, scale, DST. Powers +-1 and +-1/2 skip std::pow.
void apply_P_power(const PrecondSpectrum& p, double power, std::span<const double> x, std::span<double> y);

std::vector<double> apply_P_inv(const PrecondSpectrum& p, std::span<const double> x);
std::vector<double> apply_P_inv_sqrt(const PrecondSpectrum& p, std::span<const double> x);
std::vector<double> apply_P_sqrt(const PrecondSpectrum& p, std::span<const double> x);

} // namespace rsfde

#endif
