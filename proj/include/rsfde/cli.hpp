#ifndef RSFDE_CLI_HPP
#define RSFDE_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsfde/discretization.hpp"
#include "rsfde/krylov.hpp"

namespace rsfde {

enum class Subcommand { solve, table, spectrum, validate };

std::string to_string(Subcommand c);

/// Everything the front end needs. `n_values` are interior point counts N,
/// so N+1 = n + 1; alpha_sets holds one tuple per sweep entry.
struct RunConfig {
    Subcommand command = Subcommand::solve;
    std::string preset = "ex1"; ///< ex1, ex2, ex3 or none
    std::vector<std::size_t> m_values{4096};
    std::vector<std::size_t> n_values{15};
    std::vector<std::vector<double>> alpha_sets{{1.5}};

    // used when preset == "none"
    int dim = 1;
    std::vector<double> kappas{1.0};
    double final_time = 1.0;
    double amplitude = 1.0;
    double e_scale = 0.0;
    double e_const = 1.0;

    PrecondMode mode = PrecondMode::one_sided;
    double tol = 1e-9;
    std::optional<std::size_t> max_iter;
    std::optional<std::size_t> restart;

    std::string out;
    bool verbose = false;
    /// Write zeros in the timing columns so table output is byte-stable.
    bool deterministic = false;

    std::size_t time_index = 0;
    std::size_t samples = 10000;
    std::uint64_t seed = 20240917;
    std::size_t audit_steps = 64;
    bool inject_fault = false;
};

/// Thrown by parse_command_line for --help; what() is the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the command line (and an optional --config key=value file; flags on
/// the command line win). Throws ConfigurationError on bad input.
RunConfig parse_command_line(int argc, const char* const* argv);

/// "1.5,1.7;1.7,1.9" -> {{1.5,1.7},{1.7,1.9}}
std::vector<std::vector<double>> parse_alpha_sets(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

ProblemSpec make_spec(const RunConfig& cfg, std::size_t time_steps, std::size_t n, const std::vector<double>& alphas);
GmresConfig make_gmres(const RunConfig& cfg, int dim, PrecondMode mode);

inline constexpr const char* kTableHeader =
    "M,Nplus1,alphas,error,cpu_one_sided,iters_one_sided,cpu_two_sided,iters_two_sided";

/// Each run_* returns a process exit code.
int run_solve(const RunConfig& cfg, std::ostream& out);
int run_table(const RunConfig& cfg, std::ostream& out);
int run_spectrum(const RunConfig& cfg, std::ostream& out);
int run_validate(const RunConfig& cfg, std::ostream& out);

/// Full front end: parse, dispatch, route output to --out or `out`, report
/// errors on `err`. Exit codes: 0 ok, 1 check/solve failure, 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rsfde

#endif
