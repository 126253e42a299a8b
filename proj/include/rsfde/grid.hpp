#ifndef RSFDE_GRID_HPP
#define RSFDE_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "rsfde/errors.hpp"

namespace rsfde {

/// Tensor grid with n points along each of dim axes, stored lexicographically
/// with axis 0 fastest. This matches the Kronecker order A_d x ... x A_1 where
/// the last factor acts on the first axis.
struct GridShape {
    std::size_t n = 0;
    int dim = 1;

    std::size_t size() const noexcept
    {
        std::size_t s = 1;
        for (int i = 0; i < dim; ++i) s *= n;
        return s;
    }

    std::size_t stride(int axis) const noexcept
    {
        std::size_t s = 1;
        for (int i = 0; i < axis; ++i) s *= n;
        return s;
    }
};

/// Calls fn(in, out) on every 1-D fiber of x along `axis` and scatters the
/// result into y. x and y may alias; fibers are gathered before anything is
/// written back.
template <class Fn>
void for_each_fiber(const GridShape& g, int axis, std::span<const double> x, std::span<double> y, Fn&& fn)
{
    detail::require_size(x.size(), g.size(), "for_each_fiber input");
    detail::require_size(y.size(), g.size(), "for_each_fiber output");
    const std::size_t n = g.n;
    const std::size_t s = g.stride(axis);
    const std::size_t outer = g.size() / (s * n);
    std::vector<double> in(n), out(n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < s; ++i) {
            const std::size_t base = o * s * n + i;
            for (std::size_t k = 0; k < n; ++k) in[k] = x[base + k * s];
            fn(std::span<const double>(in), std::span<double>(out));
            for (std::size_t k = 0; k < n; ++k) y[base + k * s] = out[k];
        }
    }
}

} // namespace rsfde

#endif
