#ifndef RSFDE_DISCRETIZATION_HPP
#define RSFDE_DISCRETIZATION_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "rsfde/grid.hpp"
#include "rsfde/structured.hpp"
#include "rsfde/transforms.hpp"

namespace rsfde {

using SpaceFunction = std::function<double(std::span<const double>)>;
using SpaceTimeFunction = std::function<double(std::span<const double>, double)>;

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
};

/// e(x,t) u_t = sum_i kappa_i d^{alpha_i} u + f on a box, u = 0 on the
/// boundary, u(x,0) = initial(x). `n` counts interior points per axis.
struct ProblemSpec {
    int dim = 1;
    std::vector<Interval> domain{{0.0, 1.0}};
    std::vector<double> alphas{1.5};
    std::vector<double> kappas{1.0};
    std::size_t n = 15;
    std::size_t time_steps = 16;
    double final_time = 1.0;
    SpaceTimeFunction coefficient;
    SpaceTimeFunction source;
    SpaceFunction initial;
    /// Exact solution, when known; used only for error reporting.
    SpaceTimeFunction exact;
    std::string label;

    /// Throws ConfigurationError / DomainError on an inconsistent spec.
    void validate() const;

    double mesh_width(int axis) const;
    double time_step() const { return final_time / static_cast<double>(time_steps); }
};

/// Per-axis operators: the FCD Toeplitz block, its tau eigenvalues, the
/// compact operator H and eta = kappa tau / (2 h^alpha).
struct AxisOperators {
    FcdStencil stencil;
    CirculantEmbedding toeplitz;
    TauOperator tau_s;
    TridiagH h_op;
    std::vector<double> h_eigs;
    double mesh_width = 0.0;
    double eta = 0.0;
};

AxisOperators make_axis_operators(double alpha, double kappa, double mesh_width, double time_step, std::size_t n,
                                  std::shared_ptr<const SineTransformPlan> plan);

/// Matrix-free form of the Crank-Nicolson / quasi-compact FCD system
///   (H E^{m+1/2} + S) u^{m+1} = (H E^{m+1/2} - S) u^m + tau F^{m+1/2},
/// solved in the equivalent form (E + H^{-1} S) u^{m+1} = H^{-1} b^m.
///
/// Unknowns are ordered lexicographically with axis 0 fastest, so
///   S = sum_i eta_i (H_d x ... x S_i x ... x H_1).
/// Operator applications are const and may run concurrently; only
/// set_solution() mutates the state.
class Discretization {
public:
    explicit Discretization(ProblemSpec spec);

    const ProblemSpec& spec() const noexcept { return spec_; }
    const GridShape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return shape_.size(); }
    int dim() const noexcept { return shape_.dim; }
    std::span<const AxisOperators> axes() const noexcept { return axes_; }
    const SineTransformPlan& plan() const noexcept { return *plan_; }
    std::shared_ptr<const SineTransformPlan> shared_plan() const noexcept { return plan_; }

    double time_step() const noexcept { return tau_; }
    double half_time(std::size_t m) const noexcept { return (static_cast<double>(m) + 0.5) * tau_; }
    /// Coordinate of grid node j (0..n+1) on `axis`; 0 and n+1 are boundary nodes.
    double node(int axis, std::size_t j) const;
    /// Coordinates of interior unknown `index`.
    std::vector<double> point(std::size_t index) const;

    std::vector<double> sample(const SpaceFunction& fn) const;
    std::vector<double> sample(const SpaceTimeFunction& fn, double t) const;

    /// Diagonal of E^{m+1/2}; the most recent level is cached.
    std::shared_ptr<const std::vector<double>> e_half(std::size_t m) const;

    void apply_H(std::span<const double> x, std::span<double> y) const;
    void apply_H_inverse(std::span<const double> x, std::span<double> y) const;
    void apply_S_alpha(std::span<const double> x, std::span<double> y) const;
    /// H^{-1} S as sum_i eta_i (I x ... x H_i^{-1} S_i x ... x I); the cross-axis H
    /// factors cancel.
    void apply_Hinv_S(std::span<const double> x, std::span<double> y) const;
    void apply_A_tilde(std::size_t m, std::span<const double> x, std::span<double> y) const;
    /// Same operator through H^{-1}(S x) without the cancellation; reference path.
    void apply_A_tilde_unsimplified(std::size_t m, std::span<const double> x, std::span<double> y) const;

    /// F^{m+1/2}: the compact operator applied to f on the full grid including
    /// boundary nodes, restricted to the interior.
    std::vector<double> source_vector(std::size_t m) const;
    /// H^{-1} b^m built from the current solution.
    std::vector<double> build_rhs(std::size_t m) const;

    std::span<const double> solution() const noexcept { return u_; }
    void set_solution(std::vector<double> u);

private:
    template <class FiberOp>
    void along_axis(int axis, std::span<const double> x, std::span<double> y, FiberOp&& op) const
    {
        for_each_fiber(shape_, axis, x, y, std::forward<FiberOp>(op));
    }

    ProblemSpec spec_;
    GridShape shape_;
    double tau_;
    std::shared_ptr<const SineTransformPlan> plan_;
    std::vector<AxisOperators> axes_;
    std::vector<double> u_;

    mutable std::mutex e_mutex_;
    mutable std::size_t e_level_ = static_cast<std::size_t>(-1);
    mutable std::shared_ptr<const std::vector<double>> e_cache_;
};

} // namespace rsfde

#endif
