#include "infobs/game.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

namespace infobs {

Strategy Strategy::pull_to_max(ScalarField reference) {
    Strategy s;
    s.kind = Kind::pull_to_max;
    s.reference = std::move(reference);
    return s;
}

Strategy Strategy::pull_to_min(ScalarField reference) {
    Strategy s;
    s.kind = Kind::pull_to_min;
    s.reference = std::move(reference);
    return s;
}

Strategy Strategy::stay_put() { return Strategy{}; }

Strategy Strategy::uniform() {
    Strategy s;
    s.kind = Kind::uniform_random;
    return s;
}

Strategy Strategy::from_table(std::vector<NodeIndex> next) {
    Strategy s;
    s.kind = Kind::table;
    s.next = std::move(next);
    return s;
}

NodeIndex Strategy::choose(NodeIndex center, std::span<const NodeIndex> ball, SplitMix64& rng) const {
    switch (kind) {
        case Kind::stay: return center;
        case Kind::uniform_random: return ball[rng.below(ball.size())];
        case Kind::table:
            if (center >= next.size()) throw ContractError("strategy table has no entry for node " + std::to_string(center));
            return next[center];
        case Kind::pull_to_max:
        case Kind::pull_to_min: {
            if (!reference) throw ContractError("pull strategy without a reference field");
            const ScalarField& f = *reference;
            // Ball rows are sorted by index, so strict comparison keeps the lowest index on ties.
            NodeIndex best = ball[0];
            for (NodeIndex m : ball) {
                bool better = kind == Kind::pull_to_max ? f[m] > f[best] : f[m] < f[best];
                if (better) best = m;
            }
            return best;
        }
    }
    return center;
}

std::string_view to_string(Strategy::Kind kind) {
    switch (kind) {
        case Strategy::Kind::pull_to_max: return "pull_to_max";
        case Strategy::Kind::pull_to_min: return "pull_to_min";
        case Strategy::Kind::stay: return "stay";
        case Strategy::Kind::uniform_random: return "uniform_random";
        case Strategy::Kind::table: return "table";
    }
    return "?";
}

StoppingRule StoppingRule::never_stop() { return StoppingRule{}; }

StoppingRule StoppingRule::on_contact(const ContactSet& contact, std::size_t grid_size) {
    StoppingRule r;
    r.kind = Kind::on_contact_set;
    r.contact_mask.assign(grid_size, 0);
    for (NodeIndex i : contact.nodes) r.contact_mask.at(i) = 1;
    return r;
}

StoppingRule StoppingRule::custom(std::function<bool(NodeIndex)> stop) {
    StoppingRule r;
    r.kind = Kind::predicate;
    r.stop = std::move(stop);
    return r;
}

bool StoppingRule::should_stop(NodeIndex node) const {
    switch (kind) {
        case Kind::never: return false;
        case Kind::on_contact_set: return contact_mask.at(node) != 0;
        case Kind::predicate: return stop(node);
    }
    return false;
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::exit_at_strip: return "exit_at_strip";
        case Termination::stopped_by_player_one: return "stopped_by_player_one";
        case Termination::step_cap: return "step_cap";
    }
    return "?";
}

std::string_view to_string(Deviation d) {
    switch (d) {
        case Deviation::stay: return "stay";
        case Deviation::uniform_random: return "uniform_random";
        case Deviation::corrupted_field: return "corrupted_field";
    }
    return "?";
}

GameTrace play_game(const ProblemSpec& spec, const Strategy& player_one, const Strategy& player_two,
                    const StoppingRule& stop, NodeIndex x0, std::uint64_t seed, std::uint64_t step_cap) {
    const GridDomain& g = *spec.grid();
    if (x0 >= g.size() || !g.is_interior(x0)) {
        throw ContractError("play_game: starting node " + std::to_string(x0) + " is not interior");
    }
    if (step_cap < 1) throw ContractError("play_game: step_cap must be at least 1");

    SplitMix64 rng(seed);
    GameTrace trace;
    NodeIndex pos = x0;
    trace.positions.push_back(pos);
    for (std::uint64_t moves = 0;; ++moves) {
        if (g.is_interior(pos) && stop.should_stop(pos)) {
            trace.termination = Termination::stopped_by_player_one;
            trace.payoff = spec.obstacle()[pos];
            return trace;
        }
        if (g.is_strip(pos)) {
            trace.termination = Termination::exit_at_strip;
            trace.payoff = spec.payoff()[pos];
            return trace;
        }
        if (moves == step_cap) {
            trace.termination = Termination::step_cap;
            trace.payoff = kCappedPayoff;
            return trace;
        }
        bool one_wins = rng.coin();
        auto ball = spec.neighborhoods().members(pos);
        NodeIndex next = (one_wins ? player_one : player_two).choose(pos, ball, rng);
        if (next >= g.size() || !spec.neighborhoods().contains(pos, next)) {
            throw ContractError("strategy of player " + std::string(one_wins ? "I" : "II") + " moved from node " +
                                std::to_string(pos) + " to non-neighbor " + std::to_string(next));
        }
        trace.coins.push_back(one_wins ? 1 : 0);
        trace.positions.push_back(next);
        pos = next;
    }
}

bool MonteCarloEstimate::consistent_with(double value, double k) const {
    if (num_capped > 0 || num_games == 0) return false;
    return std::abs(mean - value) <= k * std_error;
}

MonteCarloEstimate run_games(const ProblemSpec& spec, const Strategy& player_one, const Strategy& player_two,
                             const StoppingRule& stop, NodeIndex x0, std::uint64_t num_games,
                             std::uint64_t base_seed, std::uint64_t step_cap, std::vector<GameTrace>* keep_traces,
                             std::size_t traces_to_keep) {
    if (num_games < 1) throw ContractError("run_games needs at least one game");
    std::vector<double> payoffs(num_games);
    std::vector<GameTrace> kept(keep_traces ? std::min<std::uint64_t>(traces_to_keep, num_games) : 0);

    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t k = begin; k < end; ++k) {
            GameTrace t = play_game(spec, player_one, player_two, stop, x0, base_seed + k, step_cap);
            payoffs[k] = t.payoff;
            if (k < kept.size()) kept[k] = std::move(t);
        }
    };

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, (num_games + 999) / 1000));
    if (workers <= 1) {
        work(0, num_games);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            std::uint64_t chunk = (num_games + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                std::uint64_t b = w * chunk;
                std::uint64_t e = std::min(num_games, b + chunk);
                pool.emplace_back([&, w, b, e] {
                    try {
                        work(b, e);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    // Reduce in game order so the statistic does not depend on scheduling.
    MonteCarloEstimate est;
    est.num_games = num_games;
    est.base_seed = base_seed;
    double mean = 0.0, m2 = 0.0;
    std::uint64_t n = 0;
    for (double p : payoffs) {
        if (p == kCappedPayoff) {
            ++est.num_capped;
            continue;
        }
        ++n;
        double d = p - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (p - mean);
    }
    est.mean = mean;
    est.std_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
    if (keep_traces) *keep_traces = std::move(kept);
    return est;
}

MonteCarloEstimate estimate_value(const ProblemSpec& spec, const ScalarField& u, NodeIndex x0,
                                  std::uint64_t num_games, std::uint64_t base_seed, std::uint64_t step_cap,
                                  double tau_contact) {
    ContactSet contact = extract_contact_set(u, spec.obstacle(), tau_contact);
    return run_games(spec, Strategy::pull_to_max(u), Strategy::pull_to_min(u),
                     StoppingRule::on_contact(contact, spec.grid()->size()), x0, num_games, base_seed, step_cap);
}

namespace {

ScalarField corrupt(const ScalarField& u, std::uint64_t seed) {
    auto vals = u.values();
    auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    double amplitude = 0.1 * std::max(*hi - *lo, 1e-3);
    SplitMix64 rng(seed ^ 0xc0ffee5eedull);
    std::vector<double> v(vals.begin(), vals.end());
    for (double& x : v) {
        double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x += amplitude * (2.0 * unit - 1.0);
    }
    return ScalarField(u.grid(), Support::all, std::move(v));
}

}  // namespace

MonteCarloEstimate exploit_test(const ProblemSpec& spec, const ScalarField& u, NodeIndex x0, Player deviating,
                                Deviation deviation, std::uint64_t num_games, std::uint64_t base_seed,
                                std::uint64_t step_cap, double tau_contact) {
    ContactSet contact = extract_contact_set(u, spec.obstacle(), tau_contact);
    Strategy one = Strategy::pull_to_max(u);
    Strategy two = Strategy::pull_to_min(u);
    Strategy& dev = deviating == Player::one ? one : two;
    switch (deviation) {
        case Deviation::stay: dev = Strategy::stay_put(); break;
        case Deviation::uniform_random: dev = Strategy::uniform(); break;
        case Deviation::corrupted_field: {
            ScalarField noisy = corrupt(u, base_seed);
            dev = deviating == Player::one ? Strategy::pull_to_max(noisy) : Strategy::pull_to_min(noisy);
            break;
        }
    }
    return run_games(spec, one, two, StoppingRule::on_contact(contact, spec.grid()->size()), x0, num_games,
                     base_seed, step_cap);
}

bool trace_valid(const ProblemSpec& spec, const GameTrace& trace) {
    const GridDomain& g = *spec.grid();
    if (trace.positions.empty() || trace.coins.size() + 1 != trace.positions.size()) return false;
    for (std::size_t k = 1; k < trace.positions.size(); ++k) {
        NodeIndex a = trace.positions[k - 1];
        NodeIndex b = trace.positions[k];
        if (!g.is_interior(a) || !spec.neighborhoods().contains(a, b)) return false;
        if (distance(g.point(a), g.point(b)) > spec.eps() * (1.0 + 1e-9)) return false;
    }
    NodeIndex last = trace.positions.back();
    switch (trace.termination) {
        case Termination::exit_at_strip: return g.is_strip(last) && trace.payoff == spec.payoff()[last];
        case Termination::stopped_by_player_one: return g.is_interior(last) && trace.payoff == spec.obstacle()[last];
        case Termination::step_cap: return trace.payoff == kCappedPayoff;
    }
    return false;
}

double profile_drift(const ProblemSpec& spec, const ScalarField& u, const GameTrace& trace) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < trace.positions.size(); ++k) {
        NodeIndex x = trace.positions[k];
        auto ball = spec.neighborhoods().members(x);
        double hi = u[ball[0]], lo = u[ball[0]];
        for (NodeIndex m : ball) {
            hi = std::max(hi, u[m]);
            lo = std::min(lo, u[m]);
        }
        worst = std::max(worst, std::abs(0.5 * (hi + lo) - u[x]));
    }
    return worst;
}

void write_trace_csv(std::ostream& os, const ProblemSpec& spec, const GameTrace& trace) {
    const GridDomain& g = *spec.grid();
    const bool two_d = g.dimension() == 2;
    os << (two_d ? "step,node_index,x,y,coin,action\n" : "step,node_index,x,coin,action\n");
    auto row = [&](std::size_t step, NodeIndex node, const char* coin, const char* action) {
        const Point& p = g.point(node);
        os << step << ',' << node << ',' << p.x;
        if (two_d) os << ',' << p.y;
        os << ',' << coin << ',' << action << '\n';
    };
    row(0, trace.positions[0], "-", "start");
    for (std::size_t k = 1; k < trace.positions.size(); ++k) {
        bool one = trace.coins[k - 1] != 0;
        row(k, trace.positions[k], one ? "H" : "T", one ? "move_I" : "move_II");
    }
    const char* end = trace.termination == Termination::exit_at_strip          ? "exit"
                      : trace.termination == Termination::stopped_by_player_one ? "stop"
                                                                                : "cap";
    row(trace.positions.size(), trace.positions.back(), "-", end);
}

}  // namespace infobs
