#include "infobs/io.hpp"

#include <cmath>
#include <ostream>

namespace infobs {

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json coordinates(const GridDomain& g, const ContactSet& c) {
    auto arr = nlohmann::json::array();
    for (NodeIndex i : c.nodes) {
        const Point& p = g.point(i);
        arr.push_back(g.dimension() == 2 ? nlohmann::json::array({p.x, p.y}) : nlohmann::json::array({p.x}));
    }
    return arr;
}

}  // namespace

void write_field_csv(std::ostream& os, const ProblemSpec& spec, const ScalarField& u, const ContactSet& contact) {
    const GridDomain& g = *spec.grid();
    const bool two_d = g.dimension() == 2;
    ScalarField r = residual(u, spec);
    auto old = os.precision(17);
    os << (two_d ? "x,y,u,psi,residual,contact\n" : "x,u,psi,residual,contact\n");
    for (NodeIndex i = 0; i < g.size(); ++i) {
        const Point& p = g.point(i);
        os << p.x << ',';
        if (two_d) os << p.y << ',';
        os << u[i] << ',' << spec.obstacle()[i] << ',' << r[i] << ',' << (contact.contains(i) ? 1 : 0) << '\n';
    }
    os.precision(old);
}

void write_contact_csv(std::ostream& os, const GridDomain& grid, const ContactSet& contact) {
    auto old = os.precision(17);
    os << (grid.dimension() == 2 ? "x,y\n" : "x\n");
    for (NodeIndex i : contact.nodes) {
        const Point& p = grid.point(i);
        os << p.x;
        if (grid.dimension() == 2) os << ',' << p.y;
        os << '\n';
    }
    os.precision(old);
}

nlohmann::json to_json(const SolveReport& r) {
    return {{"iterations", r.iterations},
            {"final_update_norm", r.final_update_norm},
            {"residual_max", r.residual_max},
            {"ls_violation", r.ls_violation},
            {"lipschitz_d_eps", r.lipschitz_d_eps},
            {"monotone_ok", r.monotone_ok},
            {"converged", r.converged}};
}

nlohmann::json to_json(const MonteCarloEstimate& e) {
    return {{"mean", e.mean},
            {"std_error", e.std_error},
            {"num_games", e.num_games},
            {"num_capped", e.num_capped},
            {"base_seed", e.base_seed}};
}

nlohmann::json to_json(const LewyStampacchia& ls) {
    return {{"violation_lower", ls.violation_lower}, {"violation_upper", ls.violation_upper}};
}

nlohmann::json to_json(const FixedPointDiagnostics& d) {
    return {{"strip_mismatch", d.strip_mismatch},
            {"obstacle_violation", d.obstacle_violation},
            {"super_violation", d.super_violation},
            {"harmonic_violation", d.harmonic_violation},
            {"fixed_point_gap", d.fixed_point_gap}};
}

nlohmann::json to_json(const SweepReport& rep) {
    nlohmann::json j;
    j["problem"] = rep.problem;
    j["h"] = rep.h;
    j["gamma"] = rep.gamma;
    j["tau_contact"] = rep.tau_contact;
    j["eps_list"] = rep.eps_list;
    j["reference_kind"] = rep.reference_kind;
    j["oracle_kind"] = rep.oracle_kind;
    if (rep.grid) j["reference_contact"] = coordinates(*rep.grid, rep.reference);
    auto entries = nlohmann::json::array();
    for (const SweepEntry& e : rep.entries) {
        nlohmann::json je;
        je["eps"] = e.eps;
        je["solve"] = to_json(e.report);
        je["contact_size"] = e.contact.size();
        je["contact_extent"] = finite_or_null(e.contact_extent);
        je["hausdorff_to_reference"] = finite_or_null(e.hausdorff_to_reference);
        je["hausdorff_to_finest"] = finite_or_null(e.hausdorff_to_finest);
        je["oracle_error"] = e.oracle_error ? nlohmann::json(*e.oracle_error) : nlohmann::json(nullptr);
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    j["pairwise_sup"] = rep.pairwise;
    return j;
}

}  // namespace infobs
