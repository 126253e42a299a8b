#include "rsfde/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rsfde/errors.hpp"
#include "rsfde/presets.hpp"
#include "rsfde/solver.hpp"
#include "rsfde/validation.hpp"

namespace rsfde {

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else if (ch != ' ' && ch != '\t') {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_real(const std::string& s)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigurationError("not a number: '" + s + "'");
    }
}

std::string join_alphas(const std::vector<double>& a)
{
    std::string s;
    char buf[32];
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.2f", a[i]);
        s += (i ? ";" : "") + std::string(buf);
    }
    return s;
}

} // namespace

std::string to_string(Subcommand c)
{
    switch (c) {
    case Subcommand::solve: return "solve";
    case Subcommand::table: return "table";
    case Subcommand::spectrum: return "spectrum";
    case Subcommand::validate: return "validate";
    }
    return "?";
}

std::vector<std::vector<double>> parse_alpha_sets(const std::string& text)
{
    std::vector<std::vector<double>> sets;
    if (text.find_first_not_of(" \t") == std::string::npos) return sets;
    for (const std::string& tuple : split(text, ';')) {
        std::vector<double> a;
        for (const std::string& v : split(tuple, ',')) a.push_back(parse_real(v));
        sets.push_back(std::move(a));
    }
    return sets;
}

std::vector<std::size_t> parse_size_list(const std::string& text)
{
    std::vector<std::size_t> out;
    if (text.find_first_not_of(" \t") == std::string::npos) return out;
    for (const std::string& v : split(text, ',')) {
        if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigurationError("not a positive integer: '" + v + "'");
        }
        out.push_back(std::stoul(v));
    }
    return out;
}

RunConfig parse_command_line(int argc, const char* const* argv)
{
    RunConfig cfg;
    CLI::App app{"Riesz space fractional diffusion solver"};
    app.set_config("--config", "", "flat key = value file; command-line flags override it");
    app.fallthrough();
    app.require_subcommand(1, 1);
    CLI::App* solve = app.add_subcommand("solve", "time-march one problem and report error and iterations");
    CLI::App* table = app.add_subcommand("table", "sweep (M, N, alpha) and write the comparison CSV");
    CLI::App* spectrum = app.add_subcommand("spectrum", "dense eigenvalues of A and P^-1 A as CSV");
    CLI::App* validate = app.add_subcommand("validate", "run the structural and convergence check suite");
    for (CLI::App* sub : {solve, table, spectrum, validate}) sub->fallthrough();

    std::string m_text = "4096", n_text = "15", alpha_text = "1.5", kappa_text = "1", mode_text = "one";
    std::size_t max_iter = 0, restart = 0;
    app.add_option("--preset", cfg.preset, "ex1, ex2, ex3 or none")->capture_default_str();
    app.add_option("--M", m_text, "time steps, comma-separated for table")->capture_default_str();
    app.add_option("--N", n_text, "interior points per axis, comma-separated for table")->capture_default_str();
    app.add_option("--alpha", alpha_text, "alpha tuple(s): values by ',', tuples by ';'")->capture_default_str();
    app.add_option("--mode", mode_text, "none, one or two")->capture_default_str();
    app.add_option("--tol", cfg.tol, "GMRES relative tolerance")->capture_default_str();
    app.add_option("--max-iter", max_iter, "GMRES iteration cap (0: 10/100/200 by dimension)");
    app.add_option("--restart", restart, "GMRES restart length (0: none)");
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--dim", cfg.dim, "dimension for preset none")->capture_default_str();
    app.add_option("--kappa", kappa_text, "diffusion coefficients for preset none")->capture_default_str();
    app.add_option("--T", cfg.final_time, "final time for preset none")->capture_default_str();
    app.add_option("--amplitude", cfg.amplitude, "manufactured solution amplitude for preset none")
        ->capture_default_str();
    app.add_option("--e-scale", cfg.e_scale, "e = (|x|^2 + exp(-t)) / e-scale; <= 0 selects --e-const")
        ->capture_default_str();
    app.add_option("--e-const", cfg.e_const, "constant e when e-scale <= 0")->capture_default_str();
    app.add_option("--m", cfg.time_index, "time level for spectrum")->capture_default_str();
    app.add_option("--samples", cfg.samples, "numerical range samples for validate")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed for validate")->capture_default_str();
    app.add_option("--audit-steps", cfg.audit_steps, "time steps covered by the residual audit")->capture_default_str();
    app.add_flag("--inject-fault", cfg.inject_fault, "corrupt s_1 before the stencil check");
    app.add_flag("-v,--verbose", cfg.verbose, "print per-step or per-check detail");
    app.add_flag("--deterministic", cfg.deterministic, "zero the timing columns of table output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw ConfigurationError(e.what());
    }

    if (solve->parsed()) cfg.command = Subcommand::solve;
    if (table->parsed()) cfg.command = Subcommand::table;
    if (spectrum->parsed()) cfg.command = Subcommand::spectrum;
    if (validate->parsed()) cfg.command = Subcommand::validate;

    cfg.m_values = parse_size_list(m_text);
    cfg.n_values = parse_size_list(n_text);
    cfg.alpha_sets = parse_alpha_sets(alpha_text);
    cfg.kappas.clear();
    for (const std::string& k : split(kappa_text, ',')) cfg.kappas.push_back(parse_real(k));
    cfg.mode = parse_precond_mode(mode_text);
    if (max_iter) cfg.max_iter = max_iter;
    if (restart) cfg.restart = restart;
    if (cfg.preset != "none") parse_preset(cfg.preset);
    if (cfg.command != Subcommand::table && cfg.command != Subcommand::validate &&
        (cfg.m_values.size() != 1 || cfg.n_values.size() != 1 || cfg.alpha_sets.size() != 1)) {
        throw ConfigurationError(to_string(cfg.command) + " takes a single M, N and alpha tuple");
    }
    return cfg;
}

ProblemSpec make_spec(const RunConfig& cfg, std::size_t time_steps, std::size_t n, const std::vector<double>& alphas)
{
    if (cfg.preset == "none") {
        if (cfg.kappas.size() == 1 && cfg.dim > 1) {
            return make_manufactured_problem(cfg.dim, alphas,
                                             std::vector<double>(static_cast<std::size_t>(cfg.dim), cfg.kappas[0]), n,
                                             time_steps, cfg.final_time, cfg.amplitude, cfg.e_scale, cfg.e_const);
        }
        return make_manufactured_problem(cfg.dim, alphas, cfg.kappas, n, time_steps, cfg.final_time, cfg.amplitude,
                                         cfg.e_scale, cfg.e_const);
    }
    return make_preset(parse_preset(cfg.preset), n, time_steps, alphas);
}

GmresConfig make_gmres(const RunConfig& cfg, int dim, PrecondMode mode)
{
    GmresConfig g = default_gmres_config(dim, mode);
    g.tol = cfg.tol;
    if (cfg.max_iter) g.max_iter = *cfg.max_iter;
    g.restart = cfg.restart;
    g.validate();
    return g;
}

int run_solve(const RunConfig& cfg, std::ostream& out)
{
    const ProblemSpec spec = make_spec(cfg, cfg.m_values.at(0), cfg.n_values.at(0), cfg.alpha_sets.at(0));
    const SolveReport r = time_march(spec, make_gmres(cfg, spec.dim, cfg.mode));
    char buf[256];
    out << r.summary << '\n';
    std::snprintf(buf, sizeof buf, "e_bar=%.6e e_hat=%.6e e_check=%.6e\n", r.e_bounds.e_bar, r.e_bounds.e_hat,
                  r.e_bounds.e_check);
    out << buf;
    std::snprintf(buf, sizeof buf, "steps=%zu completed=%s mean_iterations=%.2f\n", r.per_step.size(),
                  r.completed ? "yes" : "no", r.mean_iterations);
    out << buf;
    if (r.error_l2 >= 0.0) {
        std::snprintf(buf, sizeof buf, "error_l2=%.3e error_max=%.3e\n", r.error_l2, r.error_max);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "wall_seconds=%.3f wall_seconds_inclusive=%.3f\n", r.wall_seconds,
                  r.wall_seconds_inclusive);
    out << buf;
    if (cfg.verbose) {
        for (std::size_t m = 0; m < r.per_step.size(); ++m) {
            std::snprintf(buf, sizeof buf, "step %zu iterations=%zu relres=%.3e%s\n", m, r.per_step[m].iterations,
                          r.per_step[m].relative_residual, r.per_step[m].converged ? "" : " NOT CONVERGED");
            out << buf;
        }
    }
    return r.completed ? 0 : 1;
}

int run_table(const RunConfig& cfg, std::ostream& out)
{
    out << kTableHeader << '\n';
    int status = 0;
    char buf[256];
    for (std::size_t m : cfg.m_values) {
        for (std::size_t n : cfg.n_values) {
            for (const std::vector<double>& a : cfg.alpha_sets) {
                const ProblemSpec spec = make_spec(cfg, m, n, a);
                const SolveReport one = time_march(spec, make_gmres(cfg, spec.dim, PrecondMode::one_sided));
                const SolveReport two = time_march(spec, make_gmres(cfg, spec.dim, PrecondMode::two_sided));
                if (!one.completed || !two.completed) status = 1;
                const double err = one.completed ? one.error_l2 : std::nan("");
                const double c1 = cfg.deterministic ? 0.0 : one.wall_seconds;
                const double c2 = cfg.deterministic ? 0.0 : two.wall_seconds;
                std::snprintf(buf, sizeof buf, "%zu,%zu,%s,%.2e,%.3f,%.1f,%.3f,%.1f\n", m, n + 1, join_alphas(a).c_str(),
                              err, c1, one.mean_iterations, c2, two.mean_iterations);
                out << buf;
                out.flush();
            }
        }
    }
    return status;
}

int run_spectrum(const RunConfig& cfg, std::ostream& out)
{
    const ProblemSpec spec = make_spec(cfg, cfg.m_values.at(0), cfg.n_values.at(0), cfg.alpha_sets.at(0));
    const SpectrumDump d = spectrum_dump(spec, cfg.time_index);
    out << "matrix_tag,re,im\n";
    char buf[96];
    for (const auto& l : d.a_tilde) {
        std::snprintf(buf, sizeof buf, "A,%.17g,%.17g\n", l.real(), l.imag());
        out << buf;
    }
    for (const auto& l : d.preconditioned) {
        std::snprintf(buf, sizeof buf, "PinvA,%.17g,%.17g\n", l.real(), l.imag());
        out << buf;
    }
    return 0;
}

int run_validate(const RunConfig& cfg, std::ostream& out)
{
    ValidationOptions o;
    o.probe_samples = cfg.samples;
    o.seed = cfg.seed;
    o.audit_steps = cfg.audit_steps;
    o.inject_stencil_fault = cfg.inject_fault;
    const std::vector<CheckResult> checks = run_validation_suite(o);
    out << format_report(checks, cfg.verbose);
    const bool ok = all_passed(checks);
    out << (ok ? "all checks passed\n" : "validation FAILED\n");
    return ok ? 0 : 1;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    try {
        cfg = parse_command_line(argc, argv);
    } catch (const HelpRequested& h) {
        out << h.what();
        return 0;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return 2;
    }
    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out.empty()) {
        file.open(cfg.out, std::ios::binary);
        if (!file) {
            err << "cannot open " << cfg.out << " for writing\n";
            return 2;
        }
        sink = &file;
    }
    try {
        switch (cfg.command) {
        case Subcommand::solve: return run_solve(cfg, *sink);
        case Subcommand::table: return run_table(cfg, *sink);
        case Subcommand::spectrum: return run_spectrum(cfg, *sink);
        case Subcommand::validate: return run_validate(cfg, *sink);
        }
    } catch (const ConfigurationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace rsfde
