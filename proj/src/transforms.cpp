#include "rsfde/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fftw_handle.hpp"
#include "rsfde/errors.hpp"

namespace rsfde {

using detail::FftwPlanHandle;

namespace {

std::shared_ptr<const FftwPlanHandle> make_r2r(int n, fftw_r2r_kind kind, unsigned extra_flags = 0)
{
    std::vector<double> in(n), out(n);
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_plan p = fftw_plan_r2r_1d(n, in.data(), out.data(), kind, detail::kPlanFlags | extra_flags);
    if (!p) throw std::runtime_error("FFTW failed to create an r2r plan");
    return std::make_shared<const FftwPlanHandle>(p);
}

} // namespace

SineTransformPlan::SineTransformPlan(std::size_t n)
    : n_(n), scale_(1.0 / std::sqrt(2.0 * static_cast<double>(n + 1)))
{
    if (n == 0) throw DimensionError("SineTransformPlan: length must be positive");
    // RODFT00 computes 2 sum_k x_k sin(pi (j+1)(k+1)/(n+1)); scale_ makes it orthogonal.
    plan_ = make_r2r(static_cast<int>(n), FFTW_RODFT00, FFTW_PRESERVE_INPUT);
}

void SineTransformPlan::apply(std::span<const double> x, std::span<double> y) const
{
    detail::require_size(x.size(), n_, "dst1 input");
    detail::require_size(y.size(), n_, "dst1 output");
    // PRESERVE_INPUT makes the const_cast safe.
    fftw_execute_r2r(plan_->plan, const_cast<double*>(x.data()), y.data());
    for (double& v : y) v *= scale_;
}

std::vector<double> dst1(const SineTransformPlan& plan, std::span<const double> x)
{
    std::vector<double> y(plan.size());
    plan.apply(x, y);
    return y;
}

void dst1_all_axes(const SineTransformPlan& plan, const GridShape& g, std::span<const double> x,
                   std::span<double> y)
{
    detail::require_size(g.n, plan.size(), "dst1_all_axes plan length");
    for (int axis = 0; axis < g.dim; ++axis) {
        std::span<const double> src = axis == 0 ? x : std::span<const double>(y);
        for_each_fiber(g, axis, src, y, [&](std::span<const double> in, std::span<double> out) {
            plan.apply(in, out);
        });
    }
}

std::size_t fft_friendly_length(std::size_t at_least)
{
    for (std::size_t n = std::max<std::size_t>(at_least, 1);; ++n) {
        std::size_t r = n;
        for (std::size_t p : {2, 3, 5, 7}) {
            while (r % p == 0) r /= p;
        }
        if (r == 1) return n;
    }
}

CirculantEmbedding::CirculantEmbedding(std::span<const double> first_column)
    : n_(first_column.size()), column_(first_column.begin(), first_column.end())
{
    if (n_ == 0) throw DimensionError("CirculantEmbedding: empty first column");
    order_ = fft_friendly_length(2 * n_);
    const int order = static_cast<int>(order_);
    const std::size_t half = order_ / 2 + 1;
    std::vector<double> real(order_, 0.0);
    std::vector<std::complex<double>> spec(half);
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        auto* cspec = reinterpret_cast<fftw_complex*>(spec.data());
        fftw_plan f = fftw_plan_dft_r2c_1d(order, real.data(), cspec, detail::kPlanFlags);
        fftw_plan b = fftw_plan_dft_c2r_1d(order, cspec, real.data(), detail::kPlanFlags);
        if (!f || !b) throw std::runtime_error("FFTW failed to create a Toeplitz plan");
        forward_ = std::make_shared<const FftwPlanHandle>(f);
        backward_ = std::make_shared<const FftwPlanHandle>(b);
    }

    real[0] = column_[0];
    for (std::size_t k = 1; k < n_; ++k) {
        real[k] = column_[k];
        real[order_ - k] = column_[k];
    }
    fftw_execute_dft_r2c(forward_->plan, real.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    symbol_.resize(half);
    // Normalisation of the unnormalised inverse is folded into the symbol.
    const double inv_order = 1.0 / order;
    for (std::size_t k = 0; k < half; ++k) symbol_[k] = spec[k].real() * inv_order;
}

void CirculantEmbedding::apply(std::span<const double> x, std::span<double> y, ToeplitzWorkspace& ws) const
{
    detail::require_size(x.size(), n_, "toeplitz_matvec input");
    detail::require_size(y.size(), n_, "toeplitz_matvec output");
    ws.padded.assign(order_, 0.0);
    ws.spectrum.resize(symbol_.size());
    std::copy(x.begin(), x.end(), ws.padded.begin());
    auto* cspec = reinterpret_cast<fftw_complex*>(ws.spectrum.data());
    fftw_execute_dft_r2c(forward_->plan, ws.padded.data(), cspec);
    for (std::size_t k = 0; k < symbol_.size(); ++k) ws.spectrum[k] *= symbol_[k];
    fftw_execute_dft_c2r(backward_->plan, cspec, ws.padded.data());
    std::copy_n(ws.padded.begin(), n_, y.begin());
}

void CirculantEmbedding::apply(std::span<const double> x, std::span<double> y) const
{
    ToeplitzWorkspace ws;
    apply(x, y, ws);
}

std::vector<double> toeplitz_matvec(const CirculantEmbedding& embedding, std::span<const double> x)
{
    std::vector<double> y(embedding.size());
    embedding.apply(x, y);
    return y;
}

std::vector<double> cosine_sums(std::span<const double> t)
{
    const std::size_t n = t.size();
    if (n == 0) throw DimensionError("cosine_sums: empty sequence");
    // REDFT00 of length L: Y_k = x_0 + (-1)^k x_{L-1} + 2 sum_{j=1}^{L-2} x_j cos(pi j k/(L-1)).
    // With L = n+2 and x = [t_0..t_{n-1}, 0, 0] this is the required sum at k = 1..n.
    const std::size_t len = n + 2;
    std::vector<double> in(len, 0.0), out(len);
    std::copy(t.begin(), t.end(), in.begin());
    auto plan = make_r2r(static_cast<int>(len), FFTW_REDFT00);
    fftw_execute_r2r(plan->plan, in.data(), out.data());
    return std::vector<double>(out.begin() + 1, out.begin() + 1 + static_cast<std::ptrdiff_t>(n));
}

} // namespace rsfde
