#ifndef RSFDE_STRUCTURED_HPP
#define RSFDE_STRUCTURED_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rsfde/transforms.hpp"

namespace rsfde {

/// Fractional centred difference weights for the Riesz derivative of order
/// alpha: coeffs[k] = s_k, the k-th diagonal of the symmetric Toeplitz matrix.
struct FcdStencil {
    double alpha = 2.0;
    std::vector<double> coeffs;
};

/// s_0 = Gamma(alpha+1) / Gamma(alpha/2+1)^2,
/// s_k = (1 - (alpha+1)/(alpha/2+k)) s_{k-1}.
/// Throws DomainError unless 1 < alpha <= 2 and n >= 1.
FcdStencil fcd_coefficients(double alpha, std::size_t n);

/// Matrix of the tau algebra, S diag(q) S with S the orthogonal DST-I.
class TauOperator {
public:
    TauOperator(std::vector<double> eigenvalues, std::shared_ptr<const SineTransformPlan> plan);

    std::size_t size() const noexcept { return eigenvalues_.size(); }
    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    const SineTransformPlan& plan() const noexcept { return *plan_; }

    void apply(std::span<const double> x, std::span<double> y) const;
    void solve(std::span<const double> x, std::span<double> y) const;

private:
    void apply_scaled(std::span<const double> x, std::span<double> y, bool invert) const;

    std::vector<double> eigenvalues_;
    std::shared_ptr<const SineTransformPlan> plan_;
};

/// Natural tau approximation tau(T) = T - H(T) of the symmetric Toeplitz
/// matrix with the given first column. Eigenvalue i (0-based) is
///   t_0 + 2 sum_{j=1}^{n-1} t_j cos(pi j (i+1) / (n+1)),
/// paired with the i-th DST-I basis vector. A plan of the right length is
/// created when none is supplied.
TauOperator tau_from_toeplitz(std::span<const double> first_col,
                              std::shared_ptr<const SineTransformPlan> plan = nullptr);

/// Hankel part H(T) of a symmetric Toeplitz matrix: entry (i,j) (0-based) is
/// antidiagonals[i+j], with antidiagonals
///   [t_2, ..., t_{n-1}, 0, 0, 0, t_{n-1}, ..., t_2].
/// The sequence is a palindrome, so H(T) x = G (J x) with J the reversal and
/// G symmetric Toeplitz; that is how apply() runs in O(n log n).
class HankelCorrection {
public:
    explicit HankelCorrection(std::span<const double> first_col);

    std::size_t size() const noexcept { return n_; }
    std::span<const double> antidiagonals() const noexcept { return antidiagonals_; }
    double entry(std::size_t i, std::size_t j) const { return antidiagonals_.at(i + j); }

    void apply(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t n_;
    std::vector<double> antidiagonals_;
    CirculantEmbedding flipped_;
};

std::vector<double> hankel_matvec(const HankelCorrection& h, std::span<const double> x);

/// Compact operator I + (alpha/24) tridiag(1, -2, 1) of order n.
struct TridiagH {
    double alpha = 1.5;
    std::size_t n = 1;

    double diagonal() const noexcept { return 1.0 - alpha / 12.0; }
    double off_diagonal() const noexcept { return alpha / 24.0; }
    void apply(std::span<const double> x, std::span<double> y) const;
};

/// lambda_k = 1 - (alpha/6) sin^2(k pi / (2n+2)), k = 1..n, in DST-I order.
std::vector<double> h_eigenvalues(const TridiagH& h);

} // namespace rsfde

#endif
