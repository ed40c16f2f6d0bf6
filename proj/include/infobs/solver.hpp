#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "infobs/errors.hpp"
#include "infobs/field.hpp"
#include "infobs/problem.hpp"

namespace infobs {

enum class SweepMode {
    jacobi,       // apply T to the whole previous iterate
    gauss_seidel  // update in place in node order
};

struct SolveOptions {
    double tol = 1e-8;
    std::uint64_t max_iter = 1'000'000;
    SweepMode mode = SweepMode::jacobi;
    /// Called every `progress_every` iterations with (iteration, update norm).
    std::function<void(std::uint64_t, double)> progress;
    std::uint64_t progress_every = 10'000;
};

struct SolveReport {
    std::uint64_t iterations = 0;
    double final_update_norm = 0.0;
    /// Largest interior value of u - (max_B u + min_B u) / 2.
    double residual_max = 0.0;
    /// max(violation_lower, violation_upper) of the Lewy-Stampacchia check.
    double ls_violation = 0.0;
    /// Estimated Lipschitz constant with respect to d_eps.
    double lipschitz_d_eps = 0.0;
    /// Every iterate was pointwise no larger than the previous one.
    bool monotone_ok = true;
    bool converged = false;
};

struct SolveResult {
    ScalarField value;
    SolveReport report;
};

/// Thrown when max_iter is reached first; carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, ScalarField partial, SolveReport report)
        : Error(what), partial_(std::move(partial)), report_(report) {}

    const ScalarField& partial() const noexcept { return partial_; }
    const SolveReport& report() const noexcept { return report_; }

private:
    ScalarField partial_;
    SolveReport report_;
};

/// One application of the dynamic programming operator:
/// (Tu)(x) = max{Psi(x), (max_B u + min_B u)/2} in Omega, F(x) on the strip.
ScalarField bellman(const ScalarField& u, const ProblemSpec& spec);

/// Monotone value iteration from the constant supersolution max(F, Psi).
/// Throws ConvergenceError if the update norm stays above tol for max_iter steps.
SolveResult solve_value(const ProblemSpec& spec, const SolveOptions& options = {});
SolveResult solve_value(const ProblemSpec& spec, double tol, std::uint64_t max_iter);

/// u(x) - (max_B u + min_B u)/2 over the problem's neighborhoods in Omega; 0 on the strip.
ScalarField residual(const ScalarField& u, const ProblemSpec& spec);

struct LewyStampacchia {
    double violation_lower = 0.0;  // max of -r_u
    double violation_upper = 0.0;  // max of r_u - [r_Psi]_+
};

/// Lewy-Stampacchia check 0 <= r_u <= [r_Psi]_+ over interior nodes.
LewyStampacchia check_lewy_stampacchia(const ScalarField& u, const ProblemSpec& spec);

/// Solves both problems and reports u1 >= u2 - tol everywhere. Throws
/// ContractError unless F1 >= F2, Psi1 >= Psi2 on a shared grid and step.
bool check_comparison(const ProblemSpec& first, const ProblemSpec& second, double tol,
                      const SolveOptions& options = {});

/// max |u(x) - u(y)| / d_eps(x, y) over node pairs: all pairs on small grids,
/// neighborhood pairs plus seeded random long-range pairs on large ones.
double lipschitz_d_eps(const ScalarField& u, const ProblemSpec& spec);

/// Four-line discrete obstacle system measured on a field.
struct FixedPointDiagnostics {
    double strip_mismatch = 0.0;     // max |u - F| on the strip
    double obstacle_violation = 0.0; // max (Psi - u)_+ in Omega
    double super_violation = 0.0;    // max (-r)_+ in Omega
    double harmonic_violation = 0.0; // max |r| where u > Psi + tau_contact
    double fixed_point_gap = 0.0;    // ||Tu - u||_inf
};
FixedPointDiagnostics fixed_point_diagnostics(const ScalarField& u, const ProblemSpec& spec, double tau_contact);

}  // namespace infobs
