#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "infobs/cli.hpp"
#include "infobs/errors.hpp"

using namespace infobs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("infobs_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("defaults") {
        RunConfig c = parse_config("builtin = cone2d\n");
        CHECK(c.command == Command::solve);
        CHECK(c.h == 0.05);
        CHECK(c.eps == std::vector<double>{0.1});
        CHECK(c.tol == 1e-8);
        CHECK(c.tau_contact == 1e-7);
        CHECK(c.games == 10000);
        CHECK(c.seed == 0);
        CHECK_FALSE(c.gamma.has_value());
    }

    TEST_CASE("key = value parsing") {
        RunConfig c = parse_config(
            "# sweep on the cone\n"
            "command = sweep\n"
            "builtin = cone1d   # trailing comment\n"
            "h = 0.0125\n"
            "eps = 0.2, 0.1, 0.05\n"
            "max-iter = 5000\n");
        CHECK(c.command == Command::sweep);
        CHECK(c.eps == std::vector<double>{0.2, 0.1, 0.05});
        CHECK(c.max_iter == 5000);
    }

    TEST_CASE("JSON input") {
        RunConfig c = parse_config(R"({"command": "simulate", "builtin": "cone2d", "x0": [0.3, -0.1], "games": 50})");
        CHECK(c.command == Command::simulate);
        CHECK(c.x0 == std::vector<double>{0.3, -0.1});
        CHECK(c.games == 50);
        CHECK_THROWS_AS(parse_config("{\"builtin\": "), ConfigError);
    }

    TEST_CASE("errors name the rule and the line") {
        CHECK_THROWS_WITH_AS(parse_config("builtin = cone2d\neps = 0\n"), doctest::Contains("ε ∈ (0, γ]"),
                             ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("builtin = cone2d\neps = 0.2\ngamma = 0.1\n"),
                             doctest::Contains("ε ∈ (0, γ]"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("shape = interval{-1,1}\nF = 0\npsi = 1\n"), doctest::Contains("Ψ ≤ F in Γ"),
                             ConfigError);
        try {
            parse_config("builtin = cone2d\n\ncolour = red\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line() == 3);
            CHECK(e.field() == "colour");
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
        try {
            parse_config("builtin = cone2d\nh 0.1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line() == 2);
        }
        CHECK_THROWS_AS(parse_config("h = abc\n", false), ConfigError);
        CHECK_THROWS_AS(parse_config("games = -3\n", false), ConfigError);
        CHECK_THROWS_AS(parse_config("command = fly\n", false), ConfigError);
        CHECK_THROWS_AS(parse_config("builtin = cone2d\nshape = disk{0,0,1}\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("command = sweep\nbuiltin = cone1d\neps = 0.1, 0.2\n"), ConfigError);
    }

    TEST_CASE("render and parse round trip") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            RunConfig c;
            c.command = static_cast<Command>(trial % 4);
            c.builtin = trial % 2 ? "cone2d" : "";
            if (c.builtin.empty()) {
                c.shape = "disk{0,0,1}";
                c.payoff = "0";
                c.obstacle = "1 - 3*r";
            }
            c.h = unit(rng) * 0.1;
            c.eps = {unit(rng), unit(rng) / 3.0};
            if (trial % 3 == 0) c.gamma = unit(rng);
            c.tol = unit(rng) * 1e-6;
            c.tau_contact = unit(rng) * 1e-5;
            c.mode = trial % 2 ? "gauss_seidel" : "jacobi";
            c.x0 = {unit(rng) - 0.5, unit(rng) - 0.5};
            c.games = rng() % 100000 + 1;
            c.seed = rng();
            c.step_cap = rng() % 1000 + 1;
            c.out = "run " + std::to_string(trial);
            c.traces = trial;
            CHECK(parse_config(render_config(c), false) == c);
        }
    }

    TEST_CASE("check on the flat problem passes and reruns are identical") {
        fs::path a = scratch("check_a"), b = scratch("check_b");
        RunConfig c = parse_config("command = check\nbuiltin = flat\nh = 0.05\neps = 0.1\ngames = 200\n");
        std::ostringstream log;
        c.out = a.string();
        CHECK(run(c, log) == kExitOk);
        c.out = b.string();
        CHECK(run(c, log) == kExitOk);
        auto check = nlohmann::json::parse(slurp(a / "check.json"));
        CHECK(check["all_pass"] == true);
        CHECK(slurp(a / "check.json") == slurp(b / "check.json"));
        fs::remove_all(a);
        fs::remove_all(b);
    }

    TEST_CASE("solve and simulate artifacts") {
        fs::path d = scratch("solve");
        RunConfig c = parse_config("builtin = cone1d\nh = 0.05\neps = 0.1\n");
        c.out = d.string();
        std::ostringstream log;
        CHECK(run(c, log) == kExitOk);
        CHECK(fs::exists(d / "config.txt"));
        CHECK(slurp(d / "field.csv").rfind("x,u,psi,residual,contact\n", 0) == 0);
        CHECK(slurp(d / "contact.csv").rfind("x\n", 0) == 0);
        auto report = nlohmann::json::parse(slurp(d / "report.json"));
        CHECK(report["converged"] == true);
        CHECK(parse_config(slurp(d / "config.txt"), false) == c);

        c.command = Command::simulate;
        c.x0 = {0.5};
        c.games = 300;
        c.traces = 2;
        CHECK(run(c, log) == kExitOk);
        CHECK(fs::exists(d / "traces" / "game_000001.csv"));
        auto est = nlohmann::json::parse(slurp(d / "estimate.json"));
        CHECK(est["num_games"] == 300);
        fs::remove_all(d);
    }

    TEST_CASE("iteration limit maps to its exit code") {
        fs::path d = scratch("limit");
        RunConfig c = parse_config("builtin = cone2d\nmax_iter = 2\n");
        c.out = d.string();
        std::ostringstream log;
        CHECK(run(c, log) == kExitConvergence);
        fs::remove_all(d);
    }
}
