#include "infobs/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "infobs/errors.hpp"

namespace infobs {

namespace {

constexpr std::size_t kExhaustiveLipschitzNodes = 4000;

std::vector<double> sample(const GridDomain& grid, const PointFunction& f, Support support, const char* what) {
    std::vector<double> v(grid.size(), 0.0);
    for (NodeIndex i = 0; i < grid.size(); ++i) {
        bool need = support == Support::all || (support == Support::strip) == grid.is_strip(i);
        if (!need) continue;
        v[i] = f(grid.point(i));
        if (!std::isfinite(v[i])) {
            std::ostringstream os;
            os << what << " is not finite at node " << i << " (" << grid.point(i).x << ", " << grid.point(i).y << ")";
            throw ProblemError(os.str());
        }
    }
    return v;
}

}  // namespace

ScalarField ProblemSpec::combined_payoff() const {
    std::vector<double> v(grid_->size());
    for (NodeIndex i = 0; i < v.size(); ++i) v[i] = grid_->is_strip(i) ? payoff_[i] : obstacle_[i];
    return ScalarField(grid_, Support::all, std::move(v));
}

double ProblemSpec::data_max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (NodeIndex i = 0; i < grid_->size(); ++i) {
        m = std::max(m, obstacle_[i]);
        if (grid_->is_strip(i)) m = std::max(m, payoff_[i]);
    }
    return m;
}

double ProblemSpec::data_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (NodeIndex i = 0; i < grid_->size(); ++i) {
        m = std::min(m, obstacle_[i]);
        if (grid_->is_strip(i)) m = std::min(m, payoff_[i]);
    }
    return m;
}

double estimate_lipschitz(const ScalarField& field, const NeighborhoodTable& nbrs) {
    const GridDomain& g = *field.grid();
    std::vector<NodeIndex> nodes;
    for (NodeIndex i = 0; i < g.size(); ++i) {
        if (field.defined_at(i)) nodes.push_back(i);
    }
    double lip = 0.0;
    auto visit = [&](NodeIndex a, NodeIndex b) {
        if (a == b) return;
        lip = std::max(lip, std::abs(field[a] - field[b]) / distance(g.point(a), g.point(b)));
    };
    if (nodes.size() <= kExhaustiveLipschitzNodes) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < nodes.size(); ++j) visit(nodes[i], nodes[j]);
        }
    } else {
        for (NodeIndex a : nodes) {
            for (NodeIndex b : nbrs.members(a)) {
                if (field.defined_at(b)) visit(a, b);
            }
        }
    }
    return lip;
}

ProblemSpec make_problem(GridPtr grid, double eps, const PointFunction& payoff, const PointFunction& obstacle,
                         std::string name, ProblemTraits traits) {
    if (!grid) throw ContractError("make_problem needs a grid");
    if (!(eps > 0) || eps > grid->strip_width() * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "step must satisfy ε ∈ (0, γ]: eps = " << eps << ", gamma = " << grid->strip_width();
        throw ProblemError(os.str());
    }
    ProblemSpec spec;
    spec.grid_ = grid;
    spec.eps_ = eps;
    spec.nbrs_ = neighborhoods(*grid, eps);
    if (!strip_reachable(*grid, spec.nbrs_)) {
        throw GridError("some interior nodes cannot reach the strip through eps-moves");
    }
    spec.payoff_ = ScalarField(grid, Support::strip, sample(*grid, payoff, Support::strip, "payoff F"));
    spec.obstacle_ = ScalarField(grid, Support::all, sample(*grid, obstacle, Support::all, "obstacle Psi"));

    double worst = 0.0;
    std::optional<NodeIndex> worst_node;
    for (NodeIndex i : grid->strip_nodes()) {
        double excess = spec.obstacle_[i] - spec.payoff_[i];
        if (excess > worst) {
            worst = excess;
            worst_node = i;
        }
    }
    if (worst_node) {
        const Point& p = grid->point(*worst_node);
        std::ostringstream os;
        os << "incompatible data, need Ψ ≤ F in Γ: at strip node " << *worst_node << " (" << p.x << ", " << p.y
           << ") Psi exceeds F by " << worst;
        throw CompatibilityError(os.str(), *worst_node, worst);
    }

    spec.lip_payoff_ = estimate_lipschitz(spec.payoff_, spec.nbrs_);
    spec.lip_obstacle_ = estimate_lipschitz(spec.obstacle_, spec.nbrs_);
    spec.name_ = std::move(name);
    spec.traits_ = std::move(traits);
    return spec;
}

BuiltinDefinition builtin_definition(std::string_view name) {
    auto zero = [](const Point&) { return 0.0; };
    if (name == "cone2d") {
        ProblemTraits t;
        t.exact_solution = [](const Point& p) { return 1.0 - norm(p); };
        t.exact_contact_points = std::vector<Point>{Point{0.0, 0.0}};
        return {DiskShape{0.0, 0.0, 1.0}, zero, [](const Point& p) { return 1.0 - 3.0 * norm(p); }, t};
    }
    if (name == "cone1d") {
        ProblemTraits t;
        t.exact_solution = [](const Point& p) { return 1.0 - std::abs(p.x); };
        t.exact_contact_points = std::vector<Point>{Point{0.0, 0.0}};
        return {IntervalShape{-1.0, 1.0}, zero, [](const Point& p) { return 1.0 - 3.0 * std::abs(p.x); }, t};
    }
    if (name == "paraboloid2d") {
        // Radial solution: the obstacle on |x| <= rho and the cone a(1 - |x|) outside,
        // glued C^1 at rho = 1 - 1/sqrt(2) with slope a = 2 rho.
        const double rho = 1.0 - 1.0 / std::sqrt(2.0);
        const double slope = 2.0 * rho;
        ProblemTraits t;
        t.obstacle_c2 = true;
        t.obstacle_strictly_superharmonic = true;
        t.exact_solution = [rho, slope](const Point& p) {
            double r = norm(p);
            return r <= rho ? 0.5 - r * r : slope * (1.0 - r);
        };
        return {DiskShape{0.0, 0.0, 1.0}, zero, [](const Point& p) { return 0.5 - (p.x * p.x + p.y * p.y); }, t};
    }
    if (name == "flat") {
        ProblemTraits t;
        t.obstacle_c2 = true;
        t.exact_solution = zero;
        t.exact_contact_points = std::vector<Point>{};
        return {IntervalShape{-1.0, 1.0}, zero, [](const Point&) { return -1.0; }, t};
    }
    std::string known;
    for (auto n : kBuiltinNames) known += (known.empty() ? "" : ", ") + std::string(n);
    throw ProblemError("unknown builtin problem '" + std::string(name) + "' (known: " + known + ")");
}

ProblemSpec builtin(std::string_view name, double h, double eps, std::optional<double> gamma) {
    BuiltinDefinition def = builtin_definition(name);
    GridPtr grid = build_grid(def.shape, h, gamma.value_or(eps));
    return make_problem(grid, eps, def.payoff, def.obstacle, std::string(name), std::move(def.traits));
}

ScalarField oracle_1d_concave_majorant(const ProblemSpec& spec) {
    const GridDomain& g = *spec.grid();
    if (g.dimension() != 1) throw ContractError("oracle_1d_concave_majorant needs a one-dimensional grid");

    struct Vertex {
        double x;
        double v;
    };
    std::vector<Vertex> pts;
    for (NodeIndex i = 0; i < g.size(); ++i) {
        if (g.is_interior(i)) {
            pts.push_back({g.point(i).x, spec.obstacle()[i]});
            continue;
        }
        auto [k, unused] = g.lattice(i);
        auto left = g.node_at(k - 1);
        auto right = g.node_at(k + 1);
        bool adjacent = (left && g.is_interior(*left)) || (right && g.is_interior(*right));
        if (adjacent) pts.push_back({g.point(i).x, spec.payoff()[i]});
    }
    // Nodes are already sorted by x. Andrew's monotone chain, upper half.
    std::vector<Vertex> hull;
    for (const Vertex& p : pts) {
        while (hull.size() >= 2) {
            const Vertex& a = hull[hull.size() - 2];
            const Vertex& b = hull.back();
            double cross = (b.x - a.x) * (p.v - a.v) - (b.v - a.v) * (p.x - a.x);
            if (cross >= 0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }

    std::vector<double> out(g.size());
    std::size_t seg = 0;
    for (NodeIndex i = 0; i < g.size(); ++i) {
        if (g.is_strip(i)) {
            out[i] = spec.payoff()[i];
            continue;
        }
        double x = g.point(i).x;
        while (seg + 1 < hull.size() && hull[seg + 1].x < x) ++seg;
        const Vertex& a = hull[seg];
        const Vertex& b = hull[std::min(seg + 1, hull.size() - 1)];
        out[i] = b.x == a.x ? a.v : a.v + (b.v - a.v) * (x - a.x) / (b.x - a.x);
    }
    return ScalarField(spec.grid(), Support::all, std::move(out));
}

}  // namespace infobs
