#include "infobs/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "infobs/problem.hpp"

namespace infobs {

bool ContactSet::contains(NodeIndex i) const { return std::binary_search(nodes.begin(), nodes.end(), i); }

ContactSet extract_contact_set(const ScalarField& u, const ScalarField& obstacle, double tau_contact) {
    if (!(tau_contact >= 0)) throw ContractError("extract_contact_set requires tau_contact >= 0");
    if (u.size() != obstacle.size()) throw ContractError("extract_contact_set: fields live on different grids");
    const GridDomain& g = *u.grid();
    ContactSet out;
    out.tau_contact = tau_contact;
    for (NodeIndex i : g.interior_nodes()) {
        if (u.at(i) - obstacle.at(i) <= tau_contact) out.nodes.push_back(i);
    }
    return out;
}

ContactSet contact_from_points(const GridDomain& grid, const std::vector<Point>& points) {
    ContactSet out;
    for (const Point& p : points) out.nodes.push_back(grid.nearest_node(p));
    std::sort(out.nodes.begin(), out.nodes.end());
    out.nodes.erase(std::unique(out.nodes.begin(), out.nodes.end()), out.nodes.end());
    return out;
}

double directed_hausdorff(const ContactSet& a, const ContactSet& b, const GridDomain& grid) {
    if (a.empty()) return 0.0;
    if (b.empty()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (NodeIndex i : a.nodes) {
        double best = std::numeric_limits<double>::infinity();
        for (NodeIndex j : b.nodes) best = std::min(best, distance(grid.point(i), grid.point(j)));
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff(const ContactSet& a, const ContactSet& b, const GridDomain& grid) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    return std::max(directed_hausdorff(a, b, grid), directed_hausdorff(b, a, grid));
}

ScalarField infinity_laplacian_residual(const ScalarField& u, const GridDomain& grid, double stencil_radius) {
    NeighborhoodTable balls = stencil(grid, stencil_radius);
    if (u.size() != grid.size()) throw ContractError("infinity_laplacian_residual: field is on another grid");
    std::vector<double> out(grid.size(), 0.0);
    for (NodeIndex i : grid.interior_nodes()) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (NodeIndex m : balls.members(i)) {
            double v = u.at(m);
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
        out[i] = u.at(i) - 0.5 * (hi + lo);
    }
    return ScalarField(u.grid(), Support::all, std::move(out));
}

SweepReport epsilon_sweep(std::string_view problem, double h, const std::vector<double>& eps_list,
                          const SolveOptions& options, double tau_contact) {
    return epsilon_sweep(builtin_definition(problem), std::string(problem), h, eps_list, options, tau_contact);
}

SweepReport epsilon_sweep(const BuiltinDefinition& def, std::string name, double h,
                          const std::vector<double>& eps_list, const SolveOptions& options, double tau_contact) {
    if (eps_list.empty()) throw ContractError("epsilon_sweep needs at least one eps");
    for (std::size_t i = 1; i < eps_list.size(); ++i) {
        if (!(eps_list[i] < eps_list[i - 1])) throw ContractError("epsilon_sweep: eps list must be strictly decreasing");
    }
    if (!(h > 0) || h > eps_list.back() / 2.0 * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "epsilon_sweep requires 0 < h <= min(eps)/2 (h = " << h << ", min eps = " << eps_list.back() << ")";
        throw ContractError(os.str());
    }

    SweepReport rep;
    rep.problem = std::move(name);
    rep.h = h;
    rep.gamma = eps_list.front();
    rep.tau_contact = tau_contact;
    rep.eps_list = eps_list;
    rep.grid = build_grid(def.shape, h, rep.gamma);
    const GridDomain& g = *rep.grid;

    for (double eps : eps_list) {
        ProblemSpec spec = make_problem(rep.grid, eps, def.payoff, def.obstacle, rep.problem, def.traits);
        SweepEntry e;
        e.eps = eps;
        try {
            SolveResult res = solve_value(spec, options);
            e.value = std::move(res.value);
            e.report = res.report;
        } catch (const ConvergenceError& err) {
            std::ostringstream os;
            os << "sweep aborted at eps = " << eps << ": " << err.what();
            throw SweepError(os.str(), std::move(rep));
        }
        e.contact = extract_contact_set(e.value, spec.obstacle(), tau_contact);

        std::optional<ScalarField> oracle;
        if (g.dimension() == 1) {
            oracle = oracle_1d_concave_majorant(spec);
            rep.oracle_kind = "concave_majorant";
        } else if (def.traits.exact_solution) {
            std::vector<double> v(g.size());
            for (NodeIndex i = 0; i < g.size(); ++i) v[i] = (*def.traits.exact_solution)(g.point(i));
            oracle = ScalarField(rep.grid, Support::all, std::move(v));
            rep.oracle_kind = "analytic";
        } else {
            rep.oracle_kind = "none";
        }
        if (oracle) {
            double err = 0.0;
            for (NodeIndex i : g.interior_nodes()) err = std::max(err, std::abs(e.value[i] - (*oracle)[i]));
            e.oracle_error = err;
        }
        rep.entries.push_back(std::move(e));
    }

    if (def.traits.exact_contact_points) {
        rep.reference = contact_from_points(g, *def.traits.exact_contact_points);
        rep.reference_kind = "analytic";
    } else {
        rep.reference = rep.entries.back().contact;
        rep.reference_kind = "finest";
    }
    rep.reference.tau_contact = tau_contact;
    const ContactSet& finest = rep.entries.back().contact;
    for (SweepEntry& e : rep.entries) {
        e.hausdorff_to_reference = hausdorff(e.contact, rep.reference, g);
        e.hausdorff_to_finest = hausdorff(e.contact, finest, g);
        e.contact_extent = directed_hausdorff(e.contact, rep.reference, g);
    }

    const std::size_t n = rep.entries.size();
    rep.pairwise.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = sup_distance(rep.entries[i].value, rep.entries[j].value);
            rep.pairwise[i][j] = rep.pairwise[j][i] = d;
        }
    }
    return rep;
}

}  // namespace infobs
