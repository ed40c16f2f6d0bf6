// infobs: solve, simulate, sweep and check obstacle problems for the
// infinity Laplacian through the tug-of-war dynamic programming principle.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "infobs/cli.hpp"
#include "infobs/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Tug-of-war obstacle problem solver"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");

    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    auto add_flags = [&](CLI::App* sub) {
        // `--h` is the grid spacing, so help is only reachable as --help.
        sub->set_help_flag("--help", "print this help and exit");
        sub->add_option("--config", config_path, "key = value or JSON config file");
        auto opt = [&](const char* flag, const char* key, const char* help) {
            sub->add_option_function<std::string>(
                flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
        };
        opt("--builtin", "builtin", "builtin problem: cone2d, cone1d, paraboloid2d, flat");
        opt("--shape", "shape", "inline domain: interval{a,b}, disk{cx,cy,r} or rect{x0,y0,x1,y1}");
        opt("--F", "F", "inline boundary payoff expression");
        opt("--psi", "psi", "inline obstacle expression");
        opt("--h", "h", "grid spacing");
        opt("--eps", "eps", "step (comma list for sweep)");
        opt("--gamma", "gamma", "strip width (default: largest eps)");
        opt("--tol", "tol", "sup-norm update tolerance");
        opt("--max-iter", "max_iter", "iteration limit");
        opt("--tau-contact", "tau_contact", "contact tolerance");
        opt("--mode", "mode", "jacobi or gauss_seidel");
        opt("--x0", "x0", "starting point, comma separated");
        opt("--games", "games", "number of simulated games");
        opt("--seed", "seed", "base seed");
        opt("--step-cap", "step_cap", "move limit per game");
        opt("--out", "out", "output directory");
        opt("--traces", "traces", "number of game traces to dump");
    };
    for (auto [name, help] : {std::pair{"solve", "solve the discrete obstacle problem"},
                              std::pair{"simulate", "estimate the game value by Monte Carlo play"},
                              std::pair{"sweep", "solve for a decreasing list of steps on one grid"},
                              std::pair{"check", "run the invariant battery"}}) {
        add_flags(app.add_subcommand(name, help));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : infobs::kExitUsage;
    }

    try {
        infobs::RunConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "config error: cannot read " << config_path << '\n';
                return infobs::kExitUsage;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            config = infobs::parse_config(buf.str(), false);
        }
        config.command = infobs::parse_config("command = " + app.get_subcommands().front()->get_name(), false).command;
        for (auto& [key, value] : overrides) infobs::set_config_value(config, key, value);
        return infobs::run(config, std::cerr);
    } catch (const infobs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return infobs::kExitUsage;
    }
}
