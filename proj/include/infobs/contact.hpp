#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infobs/errors.hpp"
#include "infobs/field.hpp"
#include "infobs/grid.hpp"
#include "infobs/problem.hpp"
#include "infobs/solver.hpp"

namespace infobs {

/// Interior nodes where the value meets the obstacle: u - Psi <= tau_contact.
struct ContactSet {
    std::vector<NodeIndex> nodes;  // sorted
    double tau_contact = 0.0;

    bool empty() const noexcept { return nodes.empty(); }
    std::size_t size() const noexcept { return nodes.size(); }
    bool contains(NodeIndex i) const;
};

ContactSet extract_contact_set(const ScalarField& u, const ScalarField& obstacle, double tau_contact);

/// Nodes nearest to the given points, for analytically known contact sets.
ContactSet contact_from_points(const GridDomain& grid, const std::vector<Point>& points);

/// sup over a in A of the distance from a to B. 0 for empty A, +inf for
/// nonempty A and empty B.
double directed_hausdorff(const ContactSet& a, const ContactSet& b, const GridDomain& grid);

/// Symmetric Hausdorff distance with d(empty, empty) = 0 and +inf when
/// exactly one side is empty.
double hausdorff(const ContactSet& a, const ContactSet& b, const GridDomain& grid);

/// Discrete proxy for -Delta_inf u: u(x) - (max_B u + min_B u)/2 over lattice
/// balls of radius `stencil_radius` at interior nodes, 0 on the strip.
/// Throws GridError when the radius is below the grid spacing.
ScalarField infinity_laplacian_residual(const ScalarField& u, const GridDomain& grid, double stencil_radius);

struct SweepEntry {
    double eps = 0.0;
    ScalarField value;
    SolveReport report;
    ContactSet contact;
    std::optional<double> oracle_error;  // max interior |u - oracle|
    double hausdorff_to_reference = 0.0;
    double hausdorff_to_finest = 0.0;
    /// sup over the contact set of the distance to the reference set.
    double contact_extent = 0.0;
};

struct SweepReport {
    std::string problem;
    double h = 0.0;
    double gamma = 0.0;
    double tau_contact = 0.0;
    std::vector<double> eps_list;
    std::vector<SweepEntry> entries;
    /// pairwise[i][j] = ||u^{eps_i} - u^{eps_j}||_inf on the shared grid.
    std::vector<std::vector<double>> pairwise;
    std::string reference_kind;  // "analytic" or "finest"
    ContactSet reference;
    std::string oracle_kind;     // "analytic", "concave_majorant" or "none"
    GridPtr grid;
};

/// A solve inside a sweep failed; carries the entries completed so far.
class SweepError : public Error {
public:
    SweepError(const std::string& what, SweepReport partial) : Error(what), partial_(std::move(partial)) {}
    const SweepReport& partial() const noexcept { return partial_; }

private:
    SweepReport partial_;
};

/// Solves a builtin problem for every eps on one shared grid (gamma = max eps)
/// and collects values, contact sets, set distances and oracle errors.
/// Requires a strictly decreasing eps list with h <= min(eps)/2.
SweepReport epsilon_sweep(std::string_view problem, double h, const std::vector<double>& eps_list,
                          const SolveOptions& options = {}, double tau_contact = 1e-7);

/// Same sweep for an arbitrary problem definition.
SweepReport epsilon_sweep(const BuiltinDefinition& definition, std::string name, double h,
                          const std::vector<double>& eps_list, const SolveOptions& options = {},
                          double tau_contact = 1e-7);

}  // namespace infobs
