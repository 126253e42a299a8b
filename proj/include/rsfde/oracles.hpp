#ifndef RSFDE_ORACLES_HPP
#define RSFDE_ORACLES_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "rsfde/discretization.hpp"

/// Dense reference constructions. Everything here is O(n^2) memory or worse
/// and exists only to cross-check the matrix-free path on small grids.
namespace rsfde::oracle {

/// s_k from the Gamma-function closed form
///   s_k = (-1)^k Gamma(alpha+1) / (Gamma(alpha/2-k+1) Gamma(alpha/2+k+1)),
/// evaluated through the reflection formula so large k stays finite.
double fcd_closed_form(double alpha, std::size_t k);
std::vector<double> fcd_column(double alpha, std::size_t n);

Eigen::MatrixXd toeplitz(std::span<const double> first_col);
/// Hankel matrix with first column [t_2, ..., t_{n-1}, 0, 0] and last column
/// equal to its reversal.
Eigen::MatrixXd hankel_part(std::span<const double> first_col);
/// Orthogonal DST-I matrix, S_jk = sqrt(2/(n+1)) sin(pi (j+1)(k+1) / (n+1)).
Eigen::MatrixXd sine_matrix(std::size_t n);
/// Eigenvalues of tau(T) by direct cosine sums.
Eigen::VectorXd tau_eigenvalues(std::span<const double> first_col);
Eigen::MatrixXd tau_matrix(std::span<const double> first_col);
Eigen::MatrixXd compact_H(double alpha, std::size_t n);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
/// factors[i] acts on axis i; axis 0 varies fastest, so the result is
/// factors[d-1] x ... x factors[0].
Eigen::MatrixXd axis_kron(const std::vector<Eigen::MatrixXd>& factors);
/// Symmetric positive definite matrix power via eigendecomposition.
Eigen::MatrixXd spd_power(const Eigen::MatrixXd& a, double power);

/// eta_i = kappa_i tau / (2 h_i^alpha_i), from the problem data alone.
std::vector<double> etas(const ProblemSpec& spec);
Eigen::MatrixXd H_full(const ProblemSpec& spec);
/// sum_i eta_i (H x ... x T_i x ... x H); with use_tau, T_i -> tau(T_i).
Eigen::MatrixXd S_alpha(const ProblemSpec& spec, bool use_tau = false);
Eigen::VectorXd E_half(const ProblemSpec& spec, std::size_t m);
/// E^{m+1/2} + H^{-1} S computed with a dense solve, no cancellation.
Eigen::MatrixXd A_tilde(const ProblemSpec& spec, std::size_t m, bool use_tau = false);
/// e_bar I + H^{-1/2} tau(S) H^{-1/2}.
Eigen::MatrixXd preconditioner(const ProblemSpec& spec, double e_bar);
/// F^{m+1/2} written term by term as Kronecker products acting on boundary
/// data vectors (d = 1, 2, 3).
Eigen::VectorXd boundary_source(const ProblemSpec& spec, std::size_t m);
/// H^{-1} [ (H E - S) u + tau F ] for the given u.
Eigen::VectorXd rhs(const ProblemSpec& spec, std::size_t m, std::span<const double> u);

} // namespace rsfde::oracle

#endif
