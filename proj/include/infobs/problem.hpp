#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infobs/field.hpp"
#include "infobs/grid.hpp"

namespace infobs {

using PointFunction = std::function<double(const Point&)>;

/// Facts about a problem that the numerics cannot discover on their own.
struct ProblemTraits {
    /// Obstacle is C^2 (enables the K eps^2 residual bound).
    bool obstacle_c2 = false;
    /// -Delta_inf Psi > 0 on the interior of the contact set.
    bool obstacle_strictly_superharmonic = false;
    /// Closed-form solution of the continuum problem, when known.
    std::optional<PointFunction> exact_solution;
    /// Continuum contact set is known to be exactly these points.
    std::optional<std::vector<Point>> exact_contact_points;
};

/// Obstacle problem on a grid: payoff F on the strip, obstacle Psi on every
/// node, step eps and its move neighborhoods. Immutable once built.
class ProblemSpec {
public:
    const GridPtr& grid() const noexcept { return grid_; }
    double eps() const noexcept { return eps_; }
    const NeighborhoodTable& neighborhoods() const noexcept { return nbrs_; }
    const ScalarField& payoff() const noexcept { return payoff_; }
    const ScalarField& obstacle() const noexcept { return obstacle_; }
    /// Player I's final payoff: F on the strip, Psi in Omega.
    ScalarField combined_payoff() const;

    double lip_payoff() const noexcept { return lip_payoff_; }
    double lip_obstacle() const noexcept { return lip_obstacle_; }
    const std::string& name() const noexcept { return name_; }
    const ProblemTraits& traits() const noexcept { return traits_; }

    /// Largest value of F or Psi anywhere on the grid.
    double data_max() const;
    /// Smallest value of F (strip) or Psi (all nodes).
    double data_min() const;

    friend ProblemSpec make_problem(GridPtr, double, const PointFunction&, const PointFunction&, std::string,
                                    ProblemTraits);

private:
    GridPtr grid_;
    double eps_ = 0.0;
    NeighborhoodTable nbrs_;
    ScalarField payoff_;
    ScalarField obstacle_;
    double lip_payoff_ = 0.0;
    double lip_obstacle_ = 0.0;
    std::string name_;
    ProblemTraits traits_;
};

/// Samples F on strip nodes and Psi on all nodes, checks 0 < eps <= gamma,
/// eps >= h, strip reachability and Psi <= F on the strip.
/// Throws CompatibilityError naming the worst strip node when Psi > F.
ProblemSpec make_problem(GridPtr grid, double eps, const PointFunction& payoff, const PointFunction& obstacle,
                         std::string name = "custom", ProblemTraits traits = {});

inline constexpr std::string_view kBuiltinNames[] = {"cone2d", "cone1d", "paraboloid2d", "flat"};

/// Builds one of the benchmark problems. The strip width defaults to eps;
/// pass a larger gamma to share one grid across several steps.
ProblemSpec builtin(std::string_view name, double h, double eps, std::optional<double> gamma = std::nullopt);

/// Domain and data of a builtin without sampling them.
struct BuiltinDefinition {
    Shape shape;
    PointFunction payoff;
    PointFunction obstacle;
    ProblemTraits traits;
};
BuiltinDefinition builtin_definition(std::string_view name);

/// Estimated Lipschitz constant: exhaustive over node pairs on small grids,
/// over neighborhood pairs otherwise. Only nodes in the field's support count.
double estimate_lipschitz(const ScalarField& field, const NeighborhoodTable& nbrs);

/// Least concave majorant of Psi on the interior nodes that meets F at the
/// strip nodes adjacent to Omega (upper convex hull sweep). 1D only; strip
/// nodes carry F. This is the exact continuum solution in one dimension.
ScalarField oracle_1d_concave_majorant(const ProblemSpec& spec);

}  // namespace infobs
