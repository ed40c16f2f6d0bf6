#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infobs/problem.hpp"

namespace infobs {

enum class Command { solve, simulate, sweep, check };

std::string_view to_string(Command c);

/// Everything one CLI invocation needs. A problem is either a builtin name or
/// an inline spec (shape + F + psi expressions).
struct RunConfig {
    Command command = Command::solve;
    std::string builtin;
    std::string shape;
    std::string payoff;    // F expression
    std::string obstacle;  // psi expression
    double h = 0.05;
    std::optional<double> gamma;  // defaults to max(eps)
    std::vector<double> eps{0.1};
    double tol = 1e-8;
    std::uint64_t max_iter = 1'000'000;
    double tau_contact = 1e-7;
    std::string mode = "jacobi";  // or gauss_seidel
    std::vector<double> x0;       // empty: interior node nearest the domain center
    std::uint64_t games = 10'000;
    std::uint64_t seed = 0;
    std::uint64_t step_cap = 1'000'000;
    std::string out = "out";
    std::uint64_t traces = 0;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitConvergence = 3 };

/// Parses the flat `key = value` format (one pair per line, `#` comments) or,
/// when the text starts with `{`, a JSON object with the same keys. Unknown
/// keys are errors. With `validate` set the result is checked by
/// validate_config before it is returned.
RunConfig parse_config(std::string_view text, bool validate = true);

/// Sets one key from its textual value; shared by the file parser and CLI flags.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value, int line = 0);

/// Renders a config in the key = value format; parse_config inverts it exactly.
std::string render_config(const RunConfig& config);

/// Semantic checks: problem choice, eps in (0, gamma], grid parameters,
/// compatibility Psi <= F on the strip. Throws ConfigError naming the rule.
void validate_config(const RunConfig& config);

/// The configured problem at the given step.
ProblemSpec build_problem(const RunConfig& config, double eps);

/// Executes the command, writing artifacts under config.out and a short log.
/// Returns an ExitCode.
int run(const RunConfig& config, std::ostream& log);

}  // namespace infobs
