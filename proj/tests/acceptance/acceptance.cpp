// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "infobs/contact.hpp"
#include "infobs/errors.hpp"
#include "infobs/game.hpp"
#include "infobs/problem.hpp"
#include "infobs/solver.hpp"

using namespace infobs;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " FAILED(" << what << ")";
        }
    }
};

double interior_sup_diff(const ScalarField& u, const std::function<double(NodeIndex)>& ref) {
    double worst = 0.0;
    for (NodeIndex i : u.grid()->interior_nodes()) worst = std::max(worst, std::abs(u[i] - ref(i)));
    return worst;
}

double two_peak(const Point& p) { return std::max(1.0 - 5.0 * std::abs(p.x + 0.5), 1.0 - 5.0 * std::abs(p.x - 0.5)); }

void ac1(Outcome& o) {
    double err[2];
    double eps_list[2] = {0.1, 0.05};
    for (int k = 0; k < 2; ++k) {
        ProblemSpec spec = builtin("cone2d", 0.025, eps_list[k]);
        SolveResult r = solve_value(spec);
        const auto& exact = *spec.traits().exact_solution;
        err[k] = interior_sup_diff(r.value, [&](NodeIndex i) { return exact(spec.grid()->point(i)); });
        o.detail << " err(eps=" << eps_list[k] << ")=" << err[k];
    }
    o.require(err[0] <= 0.15, "eps=0.1 error <= 0.15");
    o.require(err[1] <= 0.08, "eps=0.05 error <= 0.08");
    o.require(err[1] < err[0], "error decreases with eps");
}

void ac2(Outcome& o) {
    auto zero = [](const Point&) { return 0.0; };
    for (double eps : {0.1, 0.05}) {
        double h = eps / 4.0;
        ProblemSpec cone = builtin("cone1d", h, eps);
        auto g = build_grid(IntervalShape{-1.0, 1.0}, h, eps);
        ProblemSpec peaks = make_problem(g, eps, zero, two_peak, "two-peak");
        for (const ProblemSpec* spec : {&cone, &peaks}) {
            SolveResult r = solve_value(*spec);
            ScalarField oracle = oracle_1d_concave_majorant(*spec);
            double err = interior_sup_diff(r.value, [&](NodeIndex i) { return oracle[i]; });
            o.detail << ' ' << spec->name() << "(eps=" << eps << ")=" << err;
            o.require(err <= 3.0 * eps, spec->name() + " within 3 eps");
        }
    }
}

void ac3(Outcome& o) {
    double worst = 0.0;
    for (auto name : kBuiltinNames) {
        for (double eps : {0.2, 0.1}) {
            ProblemSpec spec = builtin(name, 0.05, eps);
            LewyStampacchia ls = check_lewy_stampacchia(solve_value(spec).value, spec);
            worst = std::max({worst, ls.violation_lower, ls.violation_upper});
        }
    }
    o.detail << " max_violation=" << worst;
    o.require(worst <= 1e-6, "Lewy-Stampacchia violations <= 1e-6");
    SweepReport rep = epsilon_sweep("paraboloid2d", 0.02, {0.2, 0.1, 0.05});
    double lo = INFINITY, hi = 0.0;
    for (const SweepEntry& e : rep.entries) {
        double k = e.report.residual_max / (e.eps * e.eps);
        o.detail << " K(eps=" << e.eps << ")=" << k;
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    o.require(lo > 0.0 && hi / lo < 3.0, "residual_max / eps^2 within a factor 3");
}

void ac4(Outcome& o) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto g = build_grid(IntervalShape{-1.0, 1.0}, 0.05, 0.1);
    int passed = 0;
    for (int trial = 0; trial < 100; ++trial) {
        double a = 2 * unit(rng) - 1, w = 1 + 6 * unit(rng), ph = 6.3 * unit(rng);
        double f0 = unit(rng), f1 = unit(rng) - 0.5, bump = unit(rng), c = unit(rng) - 0.5;
        double shift = 0.5 * unit(rng), at = 2 * unit(rng) - 1;
        auto f_low = [=](const Point& p) { return f0 + f1 * p.x; };
        auto f_high = [=](const Point& p) { return f_low(p) + shift; };
        auto g_low = [=](const Point& p) { return a * std::sin(w * p.x + ph) + c; };
        auto g_high = [=](const Point& p) { return g_low(p) + std::max(0.0, bump - 3.0 * std::abs(p.x - at)); };
        // Cap the obstacle by the payoff outside Omega so the data stay compatible.
        auto cap = [](auto psi, auto f) {
            return [=](const Point& p) { return std::abs(p.x) < 1.0 ? psi(p) : std::min(psi(p), f(p)); };
        };
        ProblemSpec high = make_problem(g, 0.1, f_high, cap(g_high, f_high));
        ProblemSpec low = make_problem(g, 0.1, f_low, cap(g_low, f_low));
        passed += check_comparison(high, low, 1e-7);
    }
    o.detail << " ordered_pairs_ok=" << passed << "/100";
    o.require(passed == 100, "u1 >= u2 - 1e-7 for every pair");
}

void ac5(Outcome& o) {
    constexpr std::uint64_t games = 100'000;
    struct Case {
        const char* name;
        double x0;
    };
    for (Case c : {Case{"cone1d", 0.25}, Case{"cone1d", 0.5}, Case{"flat", 0.0}}) {
        ProblemSpec spec = builtin(c.name, 0.05, 0.1);
        SolveResult r = solve_value(spec);
        NodeIndex x0 = spec.grid()->nearest_node(Point{c.x0});
        double value = r.value[x0];
        MonteCarloEstimate est = estimate_value(spec, r.value, x0, games, 0);
        o.detail << ' ' << c.name << '@' << c.x0 << ": u=" << value << " mean=" << est.mean << "±" << est.std_error;
        o.require(est.num_capped == 0, "no capped games");
        o.require(est.consistent_with(value), std::string(c.name) + " mean within 3 std_error");
        std::uint64_t seed = 1;
        for (Player p : {Player::one, Player::two}) {
            for (Deviation d : kDeviationMenu) {
                MonteCarloEstimate dev = exploit_test(spec, r.value, x0, p, d, games, seed++ * games);
                bool ok = p == Player::one ? dev.mean <= value + 3.0 * dev.std_error
                                           : dev.mean >= value - 3.0 * dev.std_error;
                if (!ok) {
                    std::ostringstream what;
                    what << "player " << (p == Player::one ? "I" : "II") << ' ' << to_string(d) << " beat the value: "
                         << dev.mean;
                    o.require(false, what.str());
                }
            }
        }
    }
}

void ac6(Outcome& o) {
    SweepReport para = epsilon_sweep("paraboloid2d", 0.02, {0.2, 0.1, 0.05});
    double prev = INFINITY;
    for (const SweepEntry& e : para.entries) {
        o.detail << " dH(eps=" << e.eps << ")=" << e.hausdorff_to_finest;
        o.require(e.hausdorff_to_finest <= prev + 1e-12, "paraboloid Hausdorff distance nonincreasing");
        prev = e.hausdorff_to_finest;
    }
    SweepReport cone = epsilon_sweep("cone2d", 0.025, {0.2, 0.1, 0.05});
    const GridDomain& g = *cone.grid;
    for (const SweepEntry& e : cone.entries) {
        double extent = 0.0;
        for (NodeIndex i : e.contact.nodes) extent = std::max(extent, norm(g.point(i)));
        o.detail << " cone_sup|a|(eps=" << e.eps << ")=" << extent;
        o.require(!e.contact.empty(), "cone contact set nonempty");
        o.require(extent <= 2.0 * e.eps + 1e-12, "cone contact set within 2 eps of the apex");
    }
}

void ac7(Outcome& o) {
    for (double eps : {0.2, 0.1, 0.05}) {
        ProblemSpec spec = builtin("cone2d", 0.025, eps);
        SolveResult r = solve_value(spec);
        double bound = 2.0 * std::max(spec.lip_payoff(), spec.lip_obstacle());
        o.detail << " L(eps=" << eps << ")=" << r.report.lipschitz_d_eps << "/" << bound;
        o.require(r.report.lipschitz_d_eps <= bound, "d_eps Lipschitz estimate below the bound");
    }
}

void ac8(Outcome& o) {
    // Bellman monotonicity on random ordered pairs.
    ProblemSpec small = builtin("cone2d", 0.1, 0.2);
    const GridPtr& g = small.grid();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    int mono = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a(g->size()), b(g->size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = unit(rng);
            b[i] = a[i] + 0.5 * (unit(rng) + 1.0);
        }
        ScalarField ta = bellman(ScalarField(g, Support::all, a), small);
        ScalarField tb = bellman(ScalarField(g, Support::all, b), small);
        bool ok = true;
        for (NodeIndex i = 0; i < g->size(); ++i) ok = ok && ta[i] <= tb[i];
        mono += ok;
    }
    o.detail << " monotone_pairs=" << mono << "/1000";
    o.require(mono == 1000, "Bellman monotonicity");

    int sandwich = 0, fixed = 0, traces = 0, invalid = 0;
    for (auto name : kBuiltinNames) {
        ProblemSpec spec = builtin(name, 0.05, 0.1);
        SolveResult r = solve_value(spec, 1e-10, 1'000'000);
        FixedPointDiagnostics d = fixed_point_diagnostics(r.value, spec, 1e-7);
        fixed += d.strip_mismatch == 0.0 && d.obstacle_violation <= 1e-12 && d.super_violation <= 1e-8 &&
                 d.harmonic_violation <= 1e-8 && d.fixed_point_gap <= 1e-9;
        // Witnesses: F-or-Psi is a subsolution, the data maximum a supersolution.
        ScalarField sub = spec.combined_payoff();
        ScalarField super(spec.grid(), Support::all, std::vector<double>(spec.grid()->size(), spec.data_max()));
        ScalarField tsub = bellman(sub, spec), tsuper = bellman(super, spec);
        bool ok = true;
        for (NodeIndex i = 0; i < spec.grid()->size(); ++i) {
            ok = ok && tsub[i] >= sub[i] && tsuper[i] <= super[i];
            ok = ok && sub[i] <= r.value[i] + 1e-9 && r.value[i] <= super[i] + 1e-9;
        }
        sandwich += ok;
        ContactSet contact = extract_contact_set(r.value, spec.obstacle(), 1e-7);
        NodeIndex x0 = spec.grid()->interior_nodes()[spec.grid()->interior_nodes().size() / 3];
        std::vector<GameTrace> kept;
        run_games(spec, Strategy::pull_to_max(r.value), Strategy::pull_to_min(r.value),
                  StoppingRule::on_contact(contact, spec.grid()->size()), x0, 2000, 0, kDefaultStepCap, &kept, 2000);
        for (const GameTrace& t : kept) {
            ++traces;
            invalid += !trace_valid(spec, t);
        }
    }
    o.detail << " four_line=" << fixed << "/4 sandwich=" << sandwich << "/4 invalid_traces=" << invalid << "/" << traces;
    o.require(fixed == 4, "four-line system");
    o.require(sandwich == 4, "sandwich witnesses");
    o.require(invalid == 0 && traces == 8000, "trace validity");

    auto mg = build_grid(RectShape{-0.1, -0.1, 0.1, 0.1}, 0.1, 0.1);
    bool metric = mg->size() <= 30;
    for (double eps : {0.1, 0.15, 0.25}) {
        for (NodeIndex a = 0; a < mg->size(); ++a) {
            for (NodeIndex b = 0; b < mg->size(); ++b) {
                double dab = d_epsilon(mg->point(a), mg->point(b), eps);
                metric = metric && dab >= 0 && (dab == 0) == (a == b) &&
                         dab == d_epsilon(mg->point(b), mg->point(a), eps);
                for (NodeIndex c = 0; c < mg->size(); ++c) {
                    metric = metric && dab <= d_epsilon(mg->point(a), mg->point(c), eps) +
                                                   d_epsilon(mg->point(c), mg->point(b), eps) + 1e-12;
                }
            }
        }
    }
    o.detail << " metric_nodes=" << mg->size();
    o.require(metric, "d_eps metric axioms");
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        void (*body)(Outcome&);
    };
    const Criterion criteria[] = {
        {"AC1 cone benchmark", ac1},          {"AC2 1D oracle equivalence", ac2},
        {"AC3 Lewy-Stampacchia and residual", ac3}, {"AC4 comparison principle", ac4},
        {"AC5 Monte Carlo consistency", ac5}, {"AC6 contact-set convergence", ac6},
        {"AC7 discrete Lipschitz", ac7},      {"AC8 invariant battery", ac8},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("[%s] %s:%s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.label, o.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
