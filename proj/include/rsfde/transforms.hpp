#ifndef RSFDE_TRANSFORMS_HPP
#define RSFDE_TRANSFORMS_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rsfde/grid.hpp"

namespace rsfde {

namespace detail {
struct FftwPlanHandle;
}

/// Orthogonal DST-I of length n,
///   S(j,k) = sqrt(2/(n+1)) sin(pi j k / (n+1)),  1 <= j,k <= n.
/// S is symmetric and involutory. The plan is immutable once built and may be
/// shared between threads; every call works in caller-owned buffers.
class SineTransformPlan {
public:
    explicit SineTransformPlan(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    /// y = S x. x and y must not overlap.
    void apply(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t n_;
    double scale_;
    std::shared_ptr<const detail::FftwPlanHandle> plan_;
};

std::vector<double> dst1(const SineTransformPlan& plan, std::span<const double> x);

/// Applies S along every axis of a tensor grid (the multilevel transform
/// S x ... x S). x and y may alias.
void dst1_all_axes(const SineTransformPlan& plan, const GridShape& g, std::span<const double> x,
                   std::span<double> y);

/// Scratch for one Toeplitz product; reuse it across calls on one thread.
struct ToeplitzWorkspace {
    std::vector<double> padded;
    std::vector<std::complex<double>> spectrum;
};

/// Smallest L >= at_least whose only prime factors are 2, 3, 5 and 7.
std::size_t fft_friendly_length(std::size_t at_least);

/// Symmetric Toeplitz matrix T with first column [t_0, ..., t_{n-1}], embedded
/// in a circulant of order L = fft_friendly_length(2n) with first column
///   [t_0, t_1, ..., t_{n-1}, 0, ..., 0, t_{n-1}, ..., t_1]
/// (L - 2n + 1 zeros). That column is even, so its DFT is real; symbol()
/// holds the L/2 + 1 non-redundant values.
class CirculantEmbedding {
public:
    explicit CirculantEmbedding(std::span<const double> first_column);

    std::size_t size() const noexcept { return n_; }
    std::size_t order() const noexcept { return order_; }
    std::span<const double> first_column() const noexcept { return column_; }
    std::span<const double> symbol() const noexcept { return symbol_; }

    void apply(std::span<const double> x, std::span<double> y, ToeplitzWorkspace& ws) const;
    void apply(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t n_;
    std::size_t order_ = 0;
    std::vector<double> column_;
    std::vector<double> symbol_;
    std::shared_ptr<const detail::FftwPlanHandle> forward_;
    std::shared_ptr<const detail::FftwPlanHandle> backward_;
};

std::vector<double> toeplitz_matvec(const CirculantEmbedding& embedding, std::span<const double> x);

/// DCT-I style sums  c_k = t_0 + 2 sum_{j=1}^{n-1} t_j cos(pi j k / (n+1)),
/// k = 1..n, evaluated with one FFTW REDFT00 of length n+2.
std::vector<double> cosine_sums(std::span<const double> t);

} // namespace rsfde

#endif
