#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "infobs/contact.hpp"
#include "infobs/errors.hpp"
#include "infobs/expression.hpp"
#include "infobs/game.hpp"
#include "infobs/io.hpp"
#include "infobs/problem.hpp"
#include "infobs/solver.hpp"

namespace py = pybind11;
using namespace infobs;

namespace {

py::array_t<double> to_numpy(const ScalarField& f) {
    return py::array_t<double>(static_cast<py::ssize_t>(f.values().size()), f.values().data());
}

py::array_t<NodeIndex> to_numpy(std::span<const NodeIndex> nodes) {
    return py::array_t<NodeIndex>(static_cast<py::ssize_t>(nodes.size()), nodes.data());
}

// Grids are immutable after construction; the binding only needs a holder
// pybind11 accepts.
std::shared_ptr<GridDomain> held(const GridPtr& g) { return std::const_pointer_cast<GridDomain>(g); }

// nlohmann -> Python through the json module; reports are small.
py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Point to_point(const std::vector<double>& xs) {
    if (xs.empty() || xs.size() > 2) throw ContractError("a point needs one or two coordinates");
    return Point{xs[0], xs.size() > 1 ? xs[1] : 0.0};
}

SolveOptions options(double tol, std::uint64_t max_iter, const std::string& mode) {
    SolveOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    if (mode == "jacobi") {
        o.mode = SweepMode::jacobi;
    } else if (mode == "gauss_seidel") {
        o.mode = SweepMode::gauss_seidel;
    } else {
        throw ContractError("mode must be jacobi or gauss_seidel");
    }
    return o;
}

}  // namespace

PYBIND11_MODULE(_infobs, m) {
    m.doc() = "Obstacle problems for the infinity Laplacian via tug-of-war value iteration.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<GridError>(m, "GridError", base);
    py::register_exception<ProblemError>(m, "ProblemError", base);
    py::register_exception<CompatibilityError>(m, "CompatibilityError", base);
    py::register_exception<ContractError>(m, "ContractError", base);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base);
    py::register_exception<SweepError>(m, "SweepError", base);

    py::class_<GridDomain, std::shared_ptr<GridDomain>>(m, "Grid")
        .def_property_readonly("dimension", &GridDomain::dimension)
        .def_property_readonly("spacing", &GridDomain::spacing)
        .def_property_readonly("strip_width", &GridDomain::strip_width)
        .def_property_readonly("size", &GridDomain::size)
        .def_property_readonly("points",
                               [](const GridDomain& g) {
                                   py::array_t<double> a({static_cast<py::ssize_t>(g.size()),
                                                          static_cast<py::ssize_t>(g.dimension())});
                                   auto w = a.mutable_unchecked<2>();
                                   for (NodeIndex i = 0; i < g.size(); ++i) {
                                       w(i, 0) = g.point(i).x;
                                       if (g.dimension() == 2) w(i, 1) = g.point(i).y;
                                   }
                                   return a;
                               })
        .def_property_readonly("interior", [](const GridDomain& g) { return to_numpy(g.interior_nodes()); })
        .def_property_readonly("strip", [](const GridDomain& g) { return to_numpy(g.strip_nodes()); })
        .def("nearest_node", [](const GridDomain& g, const std::vector<double>& x) { return g.nearest_node(to_point(x)); });

    m.def(
        "build_grid", [](const std::string& shape, double h, double gamma) { return held(build_grid(parse_shape(shape), h, gamma)); },
        py::arg("shape"), py::arg("h"), py::arg("gamma"));

    py::class_<ScalarField>(m, "Field")
        .def_property_readonly("grid", [](const ScalarField& f) { return held(f.grid()); })
        .def_property_readonly("values", [](const ScalarField& f) { return to_numpy(f); })
        .def("__len__", [](const ScalarField& f) { return f.values().size(); });

    py::class_<ProblemSpec>(m, "Problem")
        .def_property_readonly("name", &ProblemSpec::name)
        .def_property_readonly("grid", [](const ProblemSpec& s) { return held(s.grid()); })
        .def_property_readonly("eps", &ProblemSpec::eps)
        .def_property_readonly("payoff", &ProblemSpec::payoff)
        .def_property_readonly("obstacle", &ProblemSpec::obstacle)
        .def_property_readonly("lip_payoff", &ProblemSpec::lip_payoff)
        .def_property_readonly("lip_obstacle", &ProblemSpec::lip_obstacle);

    m.attr("BUILTINS") = std::vector<std::string>(std::begin(kBuiltinNames), std::end(kBuiltinNames));
    m.def(
        "builtin", [](const std::string& name, double h, double eps, std::optional<double> gamma) {
            return builtin(name, h, eps, gamma);
        },
        py::arg("name"), py::arg("h"), py::arg("eps"), py::arg("gamma") = py::none());
    m.def(
        "make_problem",
        [](const std::string& shape, const std::string& payoff, const std::string& obstacle, double h, double eps,
           std::optional<double> gamma, const std::string& name) {
            auto grid = build_grid(parse_shape(shape), h, gamma.value_or(eps));
            Expression f = Expression::parse(payoff), psi = Expression::parse(obstacle);
            return make_problem(grid, eps, f, psi, name);
        },
        py::arg("shape"), py::arg("F"), py::arg("psi"), py::arg("h"), py::arg("eps"), py::arg("gamma") = py::none(),
        py::arg("name") = "custom");

    m.def(
        "solve",
        [](const ProblemSpec& spec, double tol, std::uint64_t max_iter, const std::string& mode) {
            SolveResult r = [&] {
                py::gil_scoped_release release;
                return solve_value(spec, options(tol, max_iter, mode));
            }();
            return py::make_tuple(r.value, to_python(to_json(r.report)));
        },
        py::arg("problem"), py::arg("tol") = 1e-8, py::arg("max_iter") = 1'000'000, py::arg("mode") = "jacobi",
        "Returns (value field, report dict).");
    m.def("bellman", &bellman, py::arg("u"), py::arg("problem"));
    m.def("residual", &residual, py::arg("u"), py::arg("problem"));
    m.def(
        "lewy_stampacchia",
        [](const ScalarField& u, const ProblemSpec& spec) { return to_python(to_json(check_lewy_stampacchia(u, spec))); },
        py::arg("u"), py::arg("problem"));
    m.def("lipschitz_d_eps", &lipschitz_d_eps, py::arg("u"), py::arg("problem"));
    m.def(
        "compare", [](const ProblemSpec& a, const ProblemSpec& b, double tol) { return check_comparison(a, b, tol); },
        py::arg("first"), py::arg("second"), py::arg("tol") = 1e-7);
    m.def("oracle_1d", &oracle_1d_concave_majorant, py::arg("problem"));
    m.def(
        "contact_set",
        [](const ScalarField& u, const ProblemSpec& spec, double tau) {
            return extract_contact_set(u, spec.obstacle(), tau).nodes;
        },
        py::arg("u"), py::arg("problem"), py::arg("tau_contact") = 1e-7);

    m.def(
        "estimate_value",
        [](const ProblemSpec& spec, const ScalarField& u, const std::vector<double>& x0, std::uint64_t games,
           std::uint64_t seed, std::uint64_t step_cap) {
            NodeIndex start = spec.grid()->nearest_node(to_point(x0));
            MonteCarloEstimate est = [&] {
                py::gil_scoped_release release;
                return estimate_value(spec, u, start, games, seed, step_cap);
            }();
            return to_python(to_json(est));
        },
        py::arg("problem"), py::arg("u"), py::arg("x0"), py::arg("games") = 10'000, py::arg("seed") = 0,
        py::arg("step_cap") = kDefaultStepCap);

    m.def(
        "sweep",
        [](const std::string& name, double h, const std::vector<double>& eps_list, double tol) {
            SolveOptions o;
            o.tol = tol;
            SweepReport rep = [&] {
                py::gil_scoped_release release;
                return epsilon_sweep(name, h, eps_list, o);
            }();
            return to_python(to_json(rep));
        },
        py::arg("name"), py::arg("h"), py::arg("eps_list"), py::arg("tol") = 1e-8);
}
