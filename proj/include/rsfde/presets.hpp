#ifndef RSFDE_PRESETS_HPP
#define RSFDE_PRESETS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "rsfde/discretization.hpp"
#include "rsfde/manufactured.hpp"

namespace rsfde {

enum class Preset { ex1, ex2, ex3 };

std::string to_string(Preset p);
Preset parse_preset(const std::string& text);
int preset_dimension(Preset p);

/// Benchmark problems on the unit box with T = 1 and the manufactured
/// solution u = C e^{-t} prod x_i^4 (1-x_i)^4:
///   ex1  d=1, kappa=100,          e=(x^2+e^{-t})/50,            C=100
///   ex2  d=2, kappa=(100,100),    e=(x1^2+x2^2+e^{-t})/100,     C=1e4
///   ex3  d=3, kappa=(100,85,103), e=(x1^2+x2^2+x3^2+e^{-t})/100, C=1e8
/// `n` is the number of interior points per axis (N+1 = 2^k means n = 2^k - 1).
ProblemSpec make_preset(Preset p, std::size_t n, std::size_t time_steps, std::vector<double> alphas);

/// Problem with the bump manufactured solution and user data on the unit box.
/// e(x,t) = (sum x_i^2 + e^{-t}) / e_scale, or the constant e_const when
/// e_scale <= 0.
ProblemSpec make_manufactured_problem(int dim, std::vector<double> alphas, std::vector<double> kappas, std::size_t n,
                                      std::size_t time_steps, double final_time, double amplitude, double e_scale,
                                      double e_const = 1.0);

} // namespace rsfde

#endif
