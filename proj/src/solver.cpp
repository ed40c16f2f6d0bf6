#include "infobs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infobs/rng.hpp"

namespace infobs {

namespace {

constexpr std::size_t kExhaustivePairNodes = 4000;
constexpr std::size_t kRandomLongRangePairs = 200'000;

inline double midrange(const NeighborhoodTable& nbrs, NodeIndex x, const double* u) {
    auto row = nbrs.members(x);
    double hi = u[row[0]];
    double lo = hi;
    for (std::size_t k = 1; k < row.size(); ++k) {
        double v = u[row[k]];
        hi = v > hi ? v : hi;
        lo = v < lo ? v : lo;
    }
    return 0.5 * (hi + lo);
}

void require_same_grid(const ScalarField& u, const ProblemSpec& spec, const char* op) {
    if (u.size() != spec.grid()->size()) {
        throw ContractError(std::string(op) + ": field and problem live on different grids");
    }
}

void require_all_defined(const ScalarField& u, const char* op) {
    if (u.support() != Support::all) throw ContractError(std::string(op) + ": field must be defined on all nodes");
}

}  // namespace

ScalarField bellman(const ScalarField& u, const ProblemSpec& spec) {
    require_same_grid(u, spec, "bellman");
    require_all_defined(u, "bellman");
    const GridDomain& g = *spec.grid();
    std::vector<double> out(g.size());
    const double* src = u.values().data();
    for (NodeIndex i : g.strip_nodes()) out[i] = spec.payoff()[i];
    for (NodeIndex i : g.interior_nodes()) {
        out[i] = std::max(spec.obstacle()[i], midrange(spec.neighborhoods(), i, src));
    }
    return ScalarField(spec.grid(), Support::all, std::move(out));
}

ScalarField residual(const ScalarField& u, const ProblemSpec& spec) {
    require_same_grid(u, spec, "residual");
    require_all_defined(u, "residual");
    const GridDomain& g = *spec.grid();
    std::vector<double> out(g.size(), 0.0);
    const double* src = u.values().data();
    for (NodeIndex i : g.interior_nodes()) out[i] = src[i] - midrange(spec.neighborhoods(), i, src);
    return ScalarField(spec.grid(), Support::all, std::move(out));
}

LewyStampacchia check_lewy_stampacchia(const ScalarField& u, const ProblemSpec& spec) {
    ScalarField ru = residual(u, spec);
    ScalarField rpsi = residual(spec.obstacle(), spec);
    LewyStampacchia out;
    for (NodeIndex i : spec.grid()->interior_nodes()) {
        out.violation_lower = std::max(out.violation_lower, -ru[i]);
        out.violation_upper = std::max(out.violation_upper, ru[i] - std::max(rpsi[i], 0.0));
    }
    return out;
}

double lipschitz_d_eps(const ScalarField& u, const ProblemSpec& spec) {
    require_same_grid(u, spec, "lipschitz_d_eps");
    const GridDomain& g = *spec.grid();
    const double eps = spec.eps();
    double lip = 0.0;
    auto visit = [&](NodeIndex a, NodeIndex b) {
        if (a == b || !u.defined_at(a) || !u.defined_at(b)) return;
        lip = std::max(lip, std::abs(u[a] - u[b]) / d_epsilon(g.point(a), g.point(b), eps));
    };
    const auto n = static_cast<NodeIndex>(g.size());
    if (g.size() <= kExhaustivePairNodes) {
        for (NodeIndex a = 0; a < n; ++a) {
            for (NodeIndex b = a + 1; b < n; ++b) visit(a, b);
        }
        return lip;
    }
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b : spec.neighborhoods().members(a)) visit(a, b);
    }
    SplitMix64 rng(0x1ee7);
    for (std::size_t k = 0; k < kRandomLongRangePairs; ++k) {
        visit(static_cast<NodeIndex>(rng.below(n)), static_cast<NodeIndex>(rng.below(n)));
    }
    return lip;
}

SolveResult solve_value(const ProblemSpec& spec, double tol, std::uint64_t max_iter) {
    SolveOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    return solve_value(spec, options);
}

SolveResult solve_value(const ProblemSpec& spec, const SolveOptions& options) {
    if (!(options.tol > 0)) throw ContractError("solve_value requires tol > 0");
    const GridDomain& g = *spec.grid();
    const NeighborhoodTable& nbrs = spec.neighborhoods();
    const double top = spec.data_max();

    std::vector<double> cur(g.size(), top);
    for (NodeIndex i : g.strip_nodes()) cur[i] = spec.payoff()[i];
    std::vector<double> next = cur;
    const double* psi = spec.obstacle().values().data();
    auto interior = g.interior_nodes();

    SolveReport report;
    double update = 0.0;
    for (std::uint64_t it = 1; it <= options.max_iter; ++it) {
        update = 0.0;
        bool monotone = true;
        if (options.mode == SweepMode::jacobi) {
            const double* src = cur.data();
            for (NodeIndex i : interior) {
                double v = std::max(psi[i], midrange(nbrs, i, src));
                double d = src[i] - v;
                monotone = monotone && d >= 0.0;
                update = std::max(update, std::abs(d));
                next[i] = v;
            }
            std::swap(cur, next);
        } else {
            double* data = cur.data();
            for (NodeIndex i : interior) {
                double v = std::max(psi[i], midrange(nbrs, i, data));
                double d = data[i] - v;
                monotone = monotone && d >= 0.0;
                update = std::max(update, std::abs(d));
                data[i] = v;
            }
        }
        report.monotone_ok = report.monotone_ok && monotone;
        report.iterations = it;
        report.final_update_norm = update;
        if (options.progress && options.progress_every > 0 && it % options.progress_every == 0) {
            options.progress(it, update);
        }
        if (update < options.tol) {
            report.converged = true;
            break;
        }
    }

    ScalarField value(spec.grid(), Support::all, std::move(cur));
    ScalarField r = residual(value, spec);
    report.residual_max = 0.0;
    for (NodeIndex i : interior) report.residual_max = std::max(report.residual_max, r[i]);
    LewyStampacchia ls = check_lewy_stampacchia(value, spec);
    report.ls_violation = std::max(ls.violation_lower, ls.violation_upper);
    report.lipschitz_d_eps = lipschitz_d_eps(value, spec);

    if (!report.converged) {
        std::ostringstream os;
        os << "value iteration did not reach tol " << options.tol << " within " << options.max_iter
           << " iterations (last update " << update << ")";
        throw ConvergenceError(os.str(), std::move(value), report);
    }
    return {std::move(value), report};
}

bool check_comparison(const ProblemSpec& first, const ProblemSpec& second, double tol, const SolveOptions& options) {
    const GridDomain& g = *first.grid();
    const GridDomain& g2 = *second.grid();
    bool same_grid = first.grid() == second.grid() ||
                     (g.size() == g2.size() && std::equal(g.points().begin(), g.points().end(), g2.points().begin()) &&
                      g.strip_nodes().size() == g2.strip_nodes().size());
    if (!same_grid) throw ContractError("check_comparison: problems must share a grid");
    if (first.eps() != second.eps()) throw ContractError("check_comparison: problems must share eps");
    for (NodeIndex i = 0; i < g.size(); ++i) {
        if (g.is_strip(i) && first.payoff()[i] < second.payoff()[i]) {
            throw ContractError("check_comparison: hypothesis F1 >= F2 fails at strip node " + std::to_string(i));
        }
        if (first.obstacle()[i] < second.obstacle()[i]) {
            throw ContractError("check_comparison: hypothesis Psi1 >= Psi2 fails at node " + std::to_string(i));
        }
    }
    SolveResult a = solve_value(first, options);
    SolveResult b = solve_value(second, options);
    for (NodeIndex i = 0; i < g.size(); ++i) {
        if (a.value[i] < b.value[i] - tol) return false;
    }
    return true;
}

FixedPointDiagnostics fixed_point_diagnostics(const ScalarField& u, const ProblemSpec& spec, double tau_contact) {
    const GridDomain& g = *spec.grid();
    FixedPointDiagnostics d;
    ScalarField r = residual(u, spec);
    ScalarField tu = bellman(u, spec);
    for (NodeIndex i : g.strip_nodes()) d.strip_mismatch = std::max(d.strip_mismatch, std::abs(u[i] - spec.payoff()[i]));
    for (NodeIndex i : g.interior_nodes()) {
        d.obstacle_violation = std::max(d.obstacle_violation, spec.obstacle()[i] - u[i]);
        d.super_violation = std::max(d.super_violation, -r[i]);
        if (u[i] > spec.obstacle()[i] + tau_contact) d.harmonic_violation = std::max(d.harmonic_violation, std::abs(r[i]));
    }
    d.fixed_point_gap = sup_distance(tu, u);
    return d;
}

}  // namespace infobs
