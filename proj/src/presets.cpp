#include "rsfde/presets.hpp"

#include <cmath>
#include <memory>

#include "rsfde/errors.hpp"

namespace rsfde {

std::string to_string(Preset p)
{
    switch (p) {
    case Preset::ex1: return "ex1";
    case Preset::ex2: return "ex2";
    case Preset::ex3: return "ex3";
    }
    return "?";
}

Preset parse_preset(const std::string& text)
{
    if (text == "ex1") return Preset::ex1;
    if (text == "ex2") return Preset::ex2;
    if (text == "ex3") return Preset::ex3;
    throw ConfigurationError("unknown preset '" + text + "' (expected ex1, ex2 or ex3)");
}

int preset_dimension(Preset p) { return p == Preset::ex1 ? 1 : (p == Preset::ex2 ? 2 : 3); }

ProblemSpec make_manufactured_problem(int dim, std::vector<double> alphas, std::vector<double> kappas, std::size_t n,
                                      std::size_t time_steps, double final_time, double amplitude, double e_scale,
                                      double e_const)
{
    ProblemSpec spec;
    spec.dim = dim;
    spec.domain.assign(static_cast<std::size_t>(dim > 0 ? dim : 0), Interval{0.0, 1.0});
    spec.alphas = alphas;
    spec.kappas = kappas;
    spec.n = n;
    spec.time_steps = time_steps;
    spec.final_time = final_time;
    if (static_cast<int>(alphas.size()) != dim || static_cast<int>(kappas.size()) != dim) {
        throw ConfigurationError("make_manufactured_problem: need one alpha and one kappa per axis");
    }

    if (e_scale > 0.0) {
        spec.coefficient = [e_scale](std::span<const double> x, double t) {
            double s = std::exp(-t);
            for (double xi : x) s += xi * xi;
            return s / e_scale;
        };
    } else {
        spec.coefficient = [e_const](std::span<const double>, double) { return e_const; };
    }

    auto u = std::make_shared<const SeparableSolution>(amplitude, alphas);
    auto e = spec.coefficient;
    spec.source = [u, e, kappas](std::span<const double> x, double t) { return u->source(x, t, e(x, t), kappas); };
    spec.initial = [u](std::span<const double> x) { return u->value(x, 0.0); };
    spec.exact = [u](std::span<const double> x, double t) { return u->value(x, t); };
    spec.validate();
    return spec;
}

ProblemSpec make_preset(Preset p, std::size_t n, std::size_t time_steps, std::vector<double> alphas)
{
    const int d = preset_dimension(p);
    if (static_cast<int>(alphas.size()) != d) {
        throw ConfigurationError(to_string(p) + " needs " + std::to_string(d) + " alpha value(s)");
    }
    ProblemSpec spec;
    switch (p) {
    case Preset::ex1:
        spec = make_manufactured_problem(1, alphas, {100.0}, n, time_steps, 1.0, 100.0, 50.0);
        break;
    case Preset::ex2:
        spec = make_manufactured_problem(2, alphas, {100.0, 100.0}, n, time_steps, 1.0, 1e4, 100.0);
        break;
    case Preset::ex3:
        spec = make_manufactured_problem(3, alphas, {100.0, 85.0, 103.0}, n, time_steps, 1.0, 1e8, 100.0);
        break;
    }
    spec.label = to_string(p);
    return spec;
}

} // namespace rsfde
