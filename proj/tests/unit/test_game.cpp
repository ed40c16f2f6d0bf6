#include <doctest.h>

#include <cmath>
#include <sstream>

#include "infobs/errors.hpp"
#include "infobs/game.hpp"
#include "infobs/solver.hpp"

using namespace infobs;

TEST_SUITE("game") {
    TEST_CASE("splitmix64 is reproducible and roughly fair") {
        SplitMix64 a(42), b(42);
        int heads = 0;
        for (int k = 0; k < 10000; ++k) {
            bool c = a.coin();
            CHECK(c == b.coin());
            heads += c;
        }
        CHECK(std::abs(heads - 5000) < 300);
        SplitMix64 r(1);
        for (int k = 0; k < 1000; ++k) CHECK(r.below(7) < 7);
    }

    TEST_CASE("starting on the contact set stops at once") {
        ProblemSpec spec = builtin("cone2d", 0.05, 0.1);
        SolveResult r = solve_value(spec);
        NodeIndex origin = *spec.grid()->node_at(0, 0);
        MonteCarloEstimate est = estimate_value(spec, r.value, origin, 200, 0);
        CHECK(est.mean == doctest::Approx(1.0));
        CHECK(est.std_error == 0.0);
        CHECK(est.num_capped == 0);
        CHECK(est.consistent_with(r.value[origin]));
    }

    TEST_CASE("constant payoff gives a constant estimate") {
        ProblemSpec spec = builtin("flat", 0.05, 0.1);
        SolveResult r = solve_value(spec);
        NodeIndex x0 = *spec.grid()->node_at(0);
        for (Deviation d : kDeviationMenu) {
            MonteCarloEstimate est = exploit_test(spec, r.value, x0, Player::two, d, 100, 3, 100000);
            CHECK(est.mean == 0.0);
            CHECK(est.std_error == 0.0);
        }
    }

    TEST_CASE("Monte Carlo estimate matches the 1D value") {
        ProblemSpec spec = builtin("cone1d", 0.05, 0.1);
        SolveResult r = solve_value(spec);
        NodeIndex x0 = *spec.grid()->node_at(10);  // x = 0.5
        MonteCarloEstimate est = estimate_value(spec, r.value, x0, 4000, 17);
        CHECK(est.num_games == 4000);
        CHECK(est.consistent_with(r.value[x0]));
    }

    TEST_CASE("results depend only on the seed") {
        ProblemSpec spec = builtin("cone2d", 0.05, 0.1);
        SolveResult r = solve_value(spec);
        NodeIndex x0 = *spec.grid()->node_at(8, 3);
        MonteCarloEstimate a = estimate_value(spec, r.value, x0, 500, 99);
        MonteCarloEstimate b = estimate_value(spec, r.value, x0, 500, 99);
        MonteCarloEstimate c = estimate_value(spec, r.value, x0, 500, 100);
        CHECK(a.mean == b.mean);
        CHECK(a.std_error == b.std_error);
        CHECK(a.mean != c.mean);
        GameTrace t1 = play_game(spec, Strategy::uniform(), Strategy::uniform(), StoppingRule::never_stop(), x0, 5, 100000);
        GameTrace t2 = play_game(spec, Strategy::uniform(), Strategy::uniform(), StoppingRule::never_stop(), x0, 5, 100000);
        CHECK(t1.positions == t2.positions);
        CHECK(t1.coins == t2.coins);
    }

    TEST_CASE("traces are valid and payoffs stay within the data") {
        ProblemSpec spec = builtin("paraboloid2d", 0.05, 0.1);
        SolveResult r = solve_value(spec);
        ContactSet contact = extract_contact_set(r.value, spec.obstacle(), 1e-7);
        NodeIndex x0 = *spec.grid()->node_at(10, -4);
        std::vector<GameTrace> traces;
        run_games(spec, Strategy::pull_to_max(r.value), Strategy::pull_to_min(r.value),
                  StoppingRule::on_contact(contact, spec.grid()->size()), x0, 300, 1, kDefaultStepCap, &traces, 300);
        REQUIRE(traces.size() == 300);
        for (const GameTrace& t : traces) {
            CHECK(trace_valid(spec, t));
            CHECK(t.positions.front() == x0);
            CHECK(t.coins.size() + 1 == t.positions.size());
            CHECK(t.payoff >= spec.data_min() - 1e-12);
            CHECK(t.payoff <= spec.data_max() + 1e-12);
            if (t.termination == Termination::exit_at_strip) {
                CHECK(spec.grid()->is_strip(t.positions.back()));
            } else {
                CHECK(t.termination == Termination::stopped_by_player_one);
                CHECK(contact.contains(t.positions.back()));
            }
            CHECK(profile_drift(spec, r.value, t) <= 1e-6);
        }
    }

    TEST_CASE("step cap marks the game capped") {
        ProblemSpec spec = builtin("cone2d", 0.05, 0.1);
        NodeIndex x0 = *spec.grid()->node_at(0, 0);
        GameTrace t = play_game(spec, Strategy::stay_put(), Strategy::stay_put(), StoppingRule::never_stop(), x0, 0, 20);
        CHECK(t.termination == Termination::step_cap);
        CHECK(t.payoff == kCappedPayoff);
        CHECK(t.positions.size() == 21);
        MonteCarloEstimate est =
            run_games(spec, Strategy::stay_put(), Strategy::stay_put(), StoppingRule::never_stop(), x0, 10, 0, 20);
        CHECK(est.num_capped == 10);
        CHECK_FALSE(est.consistent_with(0.0));
    }

    TEST_CASE("contract violations") {
        ProblemSpec spec = builtin("cone1d", 0.1, 0.1);
        const GridDomain& g = *spec.grid();
        std::vector<NodeIndex> jump(g.size());
        for (NodeIndex i = 0; i < g.size(); ++i) jump[i] = (i + 5) % g.size();
        NodeIndex x0 = *g.node_at(0);
        CHECK_THROWS_AS(play_game(spec, Strategy::from_table(jump), Strategy::from_table(jump),
                                  StoppingRule::never_stop(), x0, 0, 100),
                        ContractError);
        NodeIndex strip = g.strip_nodes().front();
        CHECK_THROWS_AS(play_game(spec, Strategy::stay_put(), Strategy::stay_put(), StoppingRule::never_stop(), strip, 0,
                                  100),
                        ContractError);
    }

    TEST_CASE("pull strategies break ties toward the lowest index") {
        ProblemSpec spec = builtin("flat", 0.1, 0.2);
        ScalarField flat(spec.grid(), Support::all, std::vector<double>(spec.grid()->size(), 1.0));
        NodeIndex c = *spec.grid()->node_at(0);
        auto ball = spec.neighborhoods().members(c);
        SplitMix64 rng(0);
        CHECK(Strategy::pull_to_max(flat).choose(c, ball, rng) == ball.front());
        CHECK(Strategy::pull_to_min(flat).choose(c, ball, rng) == ball.front());
        CHECK(Strategy::stay_put().choose(c, ball, rng) == c);
    }

    TEST_CASE("trace csv layout") {
        ProblemSpec spec = builtin("cone1d", 0.1, 0.1);
        NodeIndex x0 = *spec.grid()->node_at(8);
        GameTrace t = play_game(spec, Strategy::stay_put(), Strategy::uniform(), StoppingRule::never_stop(), x0, 3, 100000);
        std::ostringstream os;
        write_trace_csv(os, spec, t);
        std::istringstream in(os.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "step,node_index,x,coin,action");
        std::getline(in, line);
        CHECK(line.rfind("0,", 0) == 0);
        CHECK(line.find(",-,start") != std::string::npos);
        std::size_t rows = 0;
        std::string last;
        while (std::getline(in, line)) {
            ++rows;
            last = line;
        }
        CHECK(rows == t.positions.size());
        CHECK(last.find("exit") != std::string::npos);
    }
}
