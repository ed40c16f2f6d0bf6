#pragma once

#include <stdexcept>
#include <string>

namespace infobs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid geometry or discretization parameters.
class GridError : public Error {
public:
    using Error::Error;
};

/// Invalid problem data (incompatible payoffs, bad expressions, unknown builtin).
class ProblemError : public Error {
public:
    using Error::Error;
};

/// Boundary payoff below the obstacle somewhere in the strip.
class CompatibilityError : public ProblemError {
public:
    CompatibilityError(const std::string& what, std::size_t worst_node, double excess)
        : ProblemError(what), worst_node_(worst_node), excess_(excess) {}

    std::size_t worst_node() const noexcept { return worst_node_; }
    double excess() const noexcept { return excess_; }

private:
    std::size_t worst_node_;
    double excess_;
};

/// A caller broke an operation's precondition or a strategy broke its contract.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Configuration text could not be parsed or validated.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0, std::string field = {})
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line),
          field_(std::move(field)) {}

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

}  // namespace infobs
