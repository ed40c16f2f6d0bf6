#include "infobs/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "infobs/contact.hpp"
#include "infobs/errors.hpp"
#include "infobs/expression.hpp"
#include "infobs/game.hpp"
#include "infobs/io.hpp"
#include "infobs/solver.hpp"

namespace infobs {

namespace fs = std::filesystem;

std::string_view to_string(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::simulate: return "simulate";
        case Command::sweep: return "sweep";
        case Command::check: return "check";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

double parse_double(std::string_view key, std::string_view text, int line) {
    std::string t = trim(text);
    double v = 0.0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
        throw ConfigError("key '" + std::string(key) + "' expects a number, got '" + t + "'", line, std::string(key));
    }
    return v;
}

std::uint64_t parse_count(std::string_view key, std::string_view text, int line) {
    std::string t = trim(text);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
        // Accept integral scientific notation such as 1e5.
        double d = parse_double(key, t, line);
        if (d < 0 || d != std::floor(d) || d > 1.8e19) {
            throw ConfigError("key '" + std::string(key) + "' expects a non-negative integer, got '" + t + "'", line,
                              std::string(key));
        }
        return static_cast<std::uint64_t>(d);
    }
    return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text, int line) {
    std::vector<double> out;
    std::string t = trim(text);
    if (t.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = t.find(',', start);
        out.push_back(parse_double(key, std::string_view(t).substr(start, comma - start), line));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

Command parse_command(std::string_view text, int line) {
    std::string t = trim(text);
    if (t == "solve") return Command::solve;
    if (t == "simulate") return Command::simulate;
    if (t == "sweep") return Command::sweep;
    if (t == "check") return Command::check;
    throw ConfigError("unknown command '" + t + "' (expected solve, simulate, sweep or check)", line, "command");
}

std::string json_scalar_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_scalar_text(v[i]);
        return s;
    }
    throw ConfigError("unsupported JSON value " + v.dump());
}

double effective_gamma(const RunConfig& c) {
    if (c.gamma) return *c.gamma;
    return c.eps.empty() ? 0.0 : *std::max_element(c.eps.begin(), c.eps.end());
}

BuiltinDefinition definition_of(const RunConfig& c) {
    if (!c.builtin.empty()) return builtin_definition(c.builtin);
    BuiltinDefinition def;
    def.shape = parse_shape(c.shape);
    Expression f = Expression::parse(c.payoff);
    Expression psi = Expression::parse(c.obstacle);
    def.payoff = [f](const Point& p) { return f(p); };
    def.obstacle = [psi](const Point& p) { return psi(p); };
    return def;
}

std::string problem_name(const RunConfig& c) { return c.builtin.empty() ? std::string("inline") : c.builtin; }

SolveOptions solve_options(const RunConfig& c, std::ostream& log) {
    SolveOptions o;
    o.tol = c.tol;
    o.max_iter = c.max_iter;
    o.mode = c.mode == "gauss_seidel" ? SweepMode::gauss_seidel : SweepMode::jacobi;
    o.progress = [&log](std::uint64_t it, double upd) { log << "  iteration " << it << ", update " << upd << '\n'; };
    return o;
}

NodeIndex start_node(const RunConfig& c, const GridDomain& g) {
    Point target;
    if (!c.x0.empty()) {
        target = Point{c.x0[0], c.x0.size() > 1 ? c.x0[1] : 0.0};
    } else {
        auto [lo, hi] = bounding_box(g.shape());
        target = Point{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    }
    NodeIndex n = g.nearest_node(target);
    if (!c.x0.empty()) {
        if (!g.is_interior(n)) {
            std::ostringstream os;
            os << "x0 = (" << target.x << ", " << target.y << ") is not at an interior node";
            throw ConfigError(os.str(), 0, "x0");
        }
        return n;
    }
    if (g.is_interior(n)) return n;
    double best = std::numeric_limits<double>::infinity();
    for (NodeIndex i : g.interior_nodes()) {
        double d = distance(g.point(i), target);
        if (d < best) {
            best = d;
            n = i;
        }
    }
    return n;
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    fn(os);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

int run_solve(const RunConfig& c, std::ostream& log, const fs::path& out) {
    ProblemSpec spec = build_problem(c, c.eps.front());
    int code = kExitOk;
    SolveResult res;
    try {
        res = solve_value(spec, solve_options(c, log));
    } catch (const ConvergenceError& e) {
        log << "error: " << e.what() << '\n';
        res = SolveResult{e.partial(), e.report()};
        code = kExitConvergence;
    }
    ContactSet contact = extract_contact_set(res.value, spec.obstacle(), c.tau_contact);
    write_file(out / "field.csv", [&](std::ostream& os) { write_field_csv(os, spec, res.value, contact); });
    write_file(out / "contact.csv", [&](std::ostream& os) { write_contact_csv(os, *spec.grid(), contact); });
    nlohmann::json j = to_json(res.report);
    j["problem"] = spec.name();
    j["eps"] = spec.eps();
    j["h"] = spec.grid()->spacing();
    j["nodes"] = spec.grid()->size();
    j["contact_size"] = contact.size();
    write_json(out / "report.json", j);
    log << "solve " << spec.name() << ": " << res.report.iterations << " iterations, update "
        << res.report.final_update_norm << ", contact nodes " << contact.size() << '\n';
    return code;
}

int run_simulate(const RunConfig& c, std::ostream& log, const fs::path& out) {
    ProblemSpec spec = build_problem(c, c.eps.front());
    SolveResult res = solve_value(spec, solve_options(c, log));
    NodeIndex x0 = start_node(c, *spec.grid());
    ContactSet contact = extract_contact_set(res.value, spec.obstacle(), c.tau_contact);
    std::vector<GameTrace> traces;
    MonteCarloEstimate est = run_games(spec, Strategy::pull_to_max(res.value), Strategy::pull_to_min(res.value),
                                       StoppingRule::on_contact(contact, spec.grid()->size()), x0, c.games, c.seed,
                                       c.step_cap, &traces, c.traces);
    nlohmann::json j = to_json(est);
    const Point& p = spec.grid()->point(x0);
    j["x0_node"] = x0;
    j["x0"] = spec.grid()->dimension() == 2 ? nlohmann::json::array({p.x, p.y}) : nlohmann::json::array({p.x});
    j["value_at_x0"] = res.value[x0];
    j["consistent"] = est.consistent_with(res.value[x0]);
    write_json(out / "estimate.json", j);
    if (!traces.empty()) {
        fs::create_directories(out / "traces");
        for (std::size_t k = 0; k < traces.size(); ++k) {
            std::ostringstream name;
            name << "game_" << std::setw(6) << std::setfill('0') << k << ".csv";
            write_file(out / "traces" / name.str(), [&](std::ostream& os) { write_trace_csv(os, spec, traces[k]); });
        }
    }
    log << "simulate " << spec.name() << " from node " << x0 << ": mean " << est.mean << " +/- " << est.std_error
        << " (u = " << res.value[x0] << ", capped " << est.num_capped << ")\n";
    return est.num_capped == 0 ? kExitOk : kExitCheckFailed;
}

int run_sweep(const RunConfig& c, std::ostream& log, const fs::path& out) {
    SweepReport rep;
    int code = kExitOk;
    try {
        rep = epsilon_sweep(definition_of(c), problem_name(c), c.h, c.eps, solve_options(c, log), c.tau_contact);
    } catch (const SweepError& e) {
        log << "error: " << e.what() << '\n';
        rep = e.partial();
        code = kExitConvergence;
    }
    write_json(out / "sweep.json", to_json(rep));
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        write_file(out / ("contact_eps" + std::to_string(i) + ".csv"),
                   [&](std::ostream& os) { write_contact_csv(os, *rep.grid, rep.entries[i].contact); });
    }
    log << "eps, iterations, oracle_error, contact_size, hausdorff_to_reference\n";
    for (const SweepEntry& e : rep.entries) {
        log << e.eps << ", " << e.report.iterations << ", "
            << (e.oracle_error ? format_double(*e.oracle_error) : std::string("-")) << ", " << e.contact.size() << ", "
            << e.hausdorff_to_reference << '\n';
    }
    return code;
}

int run_check(const RunConfig& c, std::ostream& log, const fs::path& out) {
    ProblemSpec spec = build_problem(c, c.eps.front());
    const GridDomain& g = *spec.grid();
    SolveOptions opts = solve_options(c, log);
    auto checks = nlohmann::json::array();
    bool all = true;
    auto record = [&](const std::string& name, bool pass, nlohmann::json detail) {
        all = all && pass;
        log << (pass ? "[PASS] " : "[FAIL] ") << name << ' ' << detail.dump() << '\n';
        checks.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
    };

    SolveResult res = solve_value(spec, opts);
    const ScalarField& u = res.value;
    record("solve_monotone", res.report.monotone_ok, to_json(res.report));

    FixedPointDiagnostics fp = fixed_point_diagnostics(u, spec, c.tau_contact);
    const double slack = 10.0 * c.tol;
    record("four_line_system",
           fp.strip_mismatch == 0.0 && fp.obstacle_violation <= 0.0 && fp.super_violation <= slack &&
               fp.harmonic_violation <= slack && fp.fixed_point_gap <= c.tol,
           to_json(fp));

    LewyStampacchia ls = check_lewy_stampacchia(u, spec);
    record("lewy_stampacchia", ls.violation_lower <= 1e-6 && ls.violation_upper <= 1e-6, to_json(ls));

    const double shift = 0.5;
    BuiltinDefinition def = definition_of(c);
    ProblemSpec lowered = make_problem(
        spec.grid(), spec.eps(), [&](const Point& p) { return def.payoff(p) - shift; },
        [&](const Point& p) { return def.obstacle(p) - shift; }, spec.name() + "-shifted");
    SolveResult low = solve_value(lowered, opts);
    double max_gap = 0.0, min_gap = std::numeric_limits<double>::infinity();
    for (NodeIndex i = 0; i < g.size(); ++i) {
        max_gap = std::max(max_gap, u[i] - low.value[i]);
        min_gap = std::min(min_gap, u[i] - low.value[i]);
    }
    record("comparison", min_gap >= -c.tol && max_gap <= shift + c.tol,
           {{"min_difference", min_gap}, {"max_difference", max_gap}, {"data_shift", shift}});

    double lip = res.report.lipschitz_d_eps;
    double lip_data = std::max(spec.lip_payoff(), spec.lip_obstacle());
    record("lipschitz_d_eps", lip <= 2.0 * lip_data + slack,
           {{"estimate", lip}, {"lip_F", spec.lip_payoff()}, {"lip_psi", spec.lip_obstacle()}});

    NodeIndex x0 = start_node(c, g);
    ContactSet contact = extract_contact_set(u, spec.obstacle(), c.tau_contact);
    std::vector<GameTrace> traces;
    MonteCarloEstimate est =
        run_games(spec, Strategy::pull_to_max(u), Strategy::pull_to_min(u),
                  StoppingRule::on_contact(contact, g.size()), x0, c.games, c.seed, c.step_cap, &traces, 200);
    nlohmann::json mc = to_json(est);
    mc["value_at_x0"] = u[x0];
    record("monte_carlo_consistency", est.consistent_with(u[x0]), mc);

    bool traces_ok = std::all_of(traces.begin(), traces.end(), [&](const GameTrace& t) { return trace_valid(spec, t); });
    record("trace_validity", traces_ok, {{"traces_checked", traces.size()}});

    for (Player who : {Player::one, Player::two}) {
        for (Deviation d : kDeviationMenu) {
            MonteCarloEstimate dev = exploit_test(spec, u, x0, who, d, c.games, c.seed, c.step_cap, c.tau_contact);
            bool pass = dev.num_capped == 0 && (who == Player::one ? dev.mean <= u[x0] + 3.0 * dev.std_error
                                                                   : dev.mean >= u[x0] - 3.0 * dev.std_error);
            nlohmann::json dj = to_json(dev);
            dj["value_at_x0"] = u[x0];
            record(std::string("exploit_") + (who == Player::one ? "I_" : "II_") + std::string(to_string(d)), pass, dj);
        }
    }

    write_json(out / "check.json", {{"problem", spec.name()}, {"all_pass", all}, {"checks", checks}});
    return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

void set_config_value(RunConfig& c, std::string_view raw_key, std::string_view value, int line) {
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '-', '_');
    std::string v = trim(value);
    if (key == "command") {
        c.command = parse_command(v, line);
    } else if (key == "builtin") {
        c.builtin = v;
    } else if (key == "shape") {
        c.shape = v;
    } else if (key == "F") {
        c.payoff = v;
    } else if (key == "psi") {
        c.obstacle = v;
    } else if (key == "h") {
        c.h = parse_double(key, v, line);
    } else if (key == "gamma") {
        c.gamma = parse_double(key, v, line);
    } else if (key == "eps") {
        c.eps = parse_list(key, v, line);
    } else if (key == "tol") {
        c.tol = parse_double(key, v, line);
    } else if (key == "max_iter") {
        c.max_iter = parse_count(key, v, line);
    } else if (key == "tau_contact") {
        c.tau_contact = parse_double(key, v, line);
    } else if (key == "mode") {
        c.mode = v;
    } else if (key == "x0") {
        c.x0 = parse_list(key, v, line);
    } else if (key == "games") {
        c.games = parse_count(key, v, line);
    } else if (key == "seed") {
        c.seed = parse_count(key, v, line);
    } else if (key == "step_cap") {
        c.step_cap = parse_count(key, v, line);
    } else if (key == "out") {
        c.out = v;
    } else if (key == "traces") {
        c.traces = parse_count(key, v, line);
    } else {
        throw ConfigError("unknown key '" + key + "'", line, key);
    }
}

RunConfig parse_config(std::string_view text, bool validate) {
    RunConfig c;
    std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("JSON syntax error at byte ") + std::to_string(e.byte) + ": " + e.what());
        }
        if (!j.is_object()) throw ConfigError("JSON config must be an object");
        for (auto& [key, value] : j.items()) set_config_value(c, key, json_scalar_text(value));
    } else {
        std::istringstream is{std::string(text)};
        std::string raw;
        int line = 0;
        while (std::getline(is, raw)) {
            ++line;
            std::size_t hash = raw.find('#');
            std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (content.empty()) continue;
            std::size_t eq = content.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("syntax error at column 1: expected 'key = value'", line);
            }
            if (trim(content.substr(0, eq)).empty()) throw ConfigError("syntax error: missing key before '='", line);
            set_config_value(c, content.substr(0, eq), content.substr(eq + 1), line);
        }
    }
    if (validate) validate_config(c);
    return c;
}

std::string render_config(const RunConfig& c) {
    std::ostringstream os;
    os << "command = " << to_string(c.command) << '\n';
    if (!c.builtin.empty()) os << "builtin = " << c.builtin << '\n';
    if (!c.shape.empty()) os << "shape = " << c.shape << '\n';
    if (!c.payoff.empty()) os << "F = " << c.payoff << '\n';
    if (!c.obstacle.empty()) os << "psi = " << c.obstacle << '\n';
    os << "h = " << format_double(c.h) << '\n';
    if (c.gamma) os << "gamma = " << format_double(*c.gamma) << '\n';
    os << "eps = " << format_list(c.eps) << '\n';
    os << "tol = " << format_double(c.tol) << '\n';
    os << "max_iter = " << c.max_iter << '\n';
    os << "tau_contact = " << format_double(c.tau_contact) << '\n';
    os << "mode = " << c.mode << '\n';
    if (!c.x0.empty()) os << "x0 = " << format_list(c.x0) << '\n';
    os << "games = " << c.games << '\n';
    os << "seed = " << c.seed << '\n';
    os << "step_cap = " << c.step_cap << '\n';
    os << "out = " << c.out << '\n';
    os << "traces = " << c.traces << '\n';
    return os.str();
}

ProblemSpec build_problem(const RunConfig& c, double eps) {
    BuiltinDefinition def = definition_of(c);
    GridPtr grid = build_grid(def.shape, c.h, effective_gamma(c));
    return make_problem(grid, eps, def.payoff, def.obstacle, problem_name(c), std::move(def.traits));
}

void validate_config(const RunConfig& c) {
    const bool inline_any = !c.shape.empty() || !c.payoff.empty() || !c.obstacle.empty();
    if (!c.builtin.empty() && inline_any) {
        throw ConfigError("give either builtin or an inline problem (shape, F, psi), not both", 0, "builtin");
    }
    if (c.builtin.empty()) {
        if (!inline_any) throw ConfigError("no problem given: set builtin or shape, F and psi", 0, "builtin");
        if (c.shape.empty()) throw ConfigError("inline problem needs 'shape'", 0, "shape");
        if (c.payoff.empty()) throw ConfigError("inline problem needs 'F'", 0, "F");
        if (c.obstacle.empty()) throw ConfigError("inline problem needs 'psi'", 0, "psi");
    }
    if (!(c.h > 0)) throw ConfigError("grid spacing must satisfy h > 0", 0, "h");
    if (c.eps.empty()) throw ConfigError("eps must list at least one step", 0, "eps");
    const double gamma = effective_gamma(c);
    if (c.gamma && !(gamma > 0)) throw ConfigError("strip width must satisfy γ > 0", 0, "gamma");
    for (double e : c.eps) {
        if (!(e > 0) || e > gamma) {
            std::ostringstream os;
            os << "step violates ε ∈ (0, γ]: eps = " << e << ", gamma = " << gamma;
            throw ConfigError(os.str(), 0, "eps");
        }
        if (e < c.h * (1.0 - 1e-9)) {
            std::ostringstream os;
            os << "neighborhood degenerate: eps = " << e << " < h = " << c.h;
            throw ConfigError(os.str(), 0, "eps");
        }
    }
    if (c.command == Command::sweep) {
        for (std::size_t i = 1; i < c.eps.size(); ++i) {
            if (!(c.eps[i] < c.eps[i - 1])) throw ConfigError("sweep eps list must be strictly decreasing", 0, "eps");
        }
        if (c.h > c.eps.back() / 2.0 * (1.0 + 1e-9)) {
            throw ConfigError("sweep needs h <= min(eps)/2", 0, "h");
        }
    } else if (c.eps.size() != 1) {
        throw ConfigError("command " + std::string(to_string(c.command)) + " takes a single eps", 0, "eps");
    }
    if (!(c.tol > 0)) throw ConfigError("tol must be positive", 0, "tol");
    if (c.max_iter < 1) throw ConfigError("max_iter must be at least 1", 0, "max_iter");
    if (!(c.tau_contact >= 0)) throw ConfigError("tau_contact must be non-negative", 0, "tau_contact");
    if (c.mode != "jacobi" && c.mode != "gauss_seidel") {
        throw ConfigError("mode must be jacobi or gauss_seidel", 0, "mode");
    }
    if (c.games < 1) throw ConfigError("games must be at least 1", 0, "games");
    if (c.step_cap < 1) throw ConfigError("step_cap must be at least 1", 0, "step_cap");

    try {
        ProblemSpec spec = build_problem(c, c.eps.front());
        if (!c.x0.empty()) {
            if (static_cast<int>(c.x0.size()) != spec.grid()->dimension()) {
                throw ConfigError("x0 must have " + std::to_string(spec.grid()->dimension()) + " coordinates", 0, "x0");
            }
            start_node(c, *spec.grid());
        }
    } catch (const CompatibilityError& e) {
        throw ConfigError(e.what(), 0, "psi");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

int run(const RunConfig& c, std::ostream& log) {
    try {
        validate_config(c);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        fs::path out(c.out);
        fs::create_directories(out);
        write_file(out / "config.txt", [&](std::ostream& os) { os << render_config(c); });
        switch (c.command) {
            case Command::solve: return run_solve(c, log, out);
            case Command::simulate: return run_simulate(c, log, out);
            case Command::sweep: return run_sweep(c, log, out);
            case Command::check: return run_check(c, log, out);
        }
    } catch (const ConvergenceError& e) {
        log << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace infobs
