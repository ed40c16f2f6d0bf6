#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "infobs/contact.hpp"
#include "infobs/field.hpp"
#include "infobs/problem.hpp"
#include "infobs/rng.hpp"

namespace infobs {

/// Stationary strategy: the next position depends only on the current node.
struct Strategy {
    enum class Kind {
        pull_to_max,     // arg-max of the reference field over the ball
        pull_to_min,     // arg-min of the reference field over the ball
        stay,            // remain at the current node
        uniform_random,  // uniformly random ball member
        table            // custom next-node table
    };

    Kind kind = Kind::stay;
    std::optional<ScalarField> reference;
    std::vector<NodeIndex> next;  // for Kind::table, indexed by node

    static Strategy pull_to_max(ScalarField reference);
    static Strategy pull_to_min(ScalarField reference);
    static Strategy stay_put();
    static Strategy uniform();
    static Strategy from_table(std::vector<NodeIndex> next);

    /// Chooses a move from `center`; ties go to the lowest node index.
    NodeIndex choose(NodeIndex center, std::span<const NodeIndex> ball, SplitMix64& rng) const;
};

std::string_view to_string(Strategy::Kind kind);

/// Player I's stop rule, evaluated at interior positions only.
struct StoppingRule {
    enum class Kind { never, on_contact_set, predicate };

    Kind kind = Kind::never;
    std::vector<std::uint8_t> contact_mask;
    std::function<bool(NodeIndex)> stop;

    static StoppingRule never_stop();
    static StoppingRule on_contact(const ContactSet& contact, std::size_t grid_size);
    static StoppingRule custom(std::function<bool(NodeIndex)> stop);

    bool should_stop(NodeIndex node) const;
};

enum class Termination { exit_at_strip, stopped_by_player_one, step_cap };

std::string_view to_string(Termination t);

/// Payoff recorded for games that hit the step cap (Player I's penalty).
inline constexpr double kCappedPayoff = -std::numeric_limits<double>::infinity();

struct GameTrace {
    std::vector<NodeIndex> positions;  // x_0 ... x_T
    std::vector<std::uint8_t> coins;   // 1 when Player I won the toss before move k
    Termination termination = Termination::exit_at_strip;
    double payoff = 0.0;               // kCappedPayoff for capped games
};

/// Simulates one game with a seeded fair coin. Throws ContractError if x0 is
/// not interior or a strategy picks a node outside the current ball.
GameTrace play_game(const ProblemSpec& spec, const Strategy& player_one, const Strategy& player_two,
                    const StoppingRule& stop, NodeIndex x0, std::uint64_t seed, std::uint64_t step_cap);

struct MonteCarloEstimate {
    double mean = 0.0;       // over non-capped games
    double std_error = 0.0;  // sample std / sqrt(games counted)
    std::uint64_t num_games = 0;
    std::uint64_t num_capped = 0;
    std::uint64_t base_seed = 0;

    /// |mean - value| <= k * std_error, inconclusive (false) when any game was capped.
    bool consistent_with(double value, double k = 3.0) const;
};

inline constexpr std::uint64_t kDefaultStepCap = 1'000'000;

/// Runs `num_games` plays with game k seeded by base_seed + k and reduces
/// them in game order, so the result is independent of scheduling.
MonteCarloEstimate run_games(const ProblemSpec& spec, const Strategy& player_one, const Strategy& player_two,
                             const StoppingRule& stop, NodeIndex x0, std::uint64_t num_games,
                             std::uint64_t base_seed, std::uint64_t step_cap = kDefaultStepCap,
                             std::vector<GameTrace>* keep_traces = nullptr, std::size_t traces_to_keep = 0);

/// Expected payoff under the candidate optimal profile for u: pull toward
/// max u, pull toward min u, stop on the contact set of u.
MonteCarloEstimate estimate_value(const ProblemSpec& spec, const ScalarField& u, NodeIndex x0,
                                  std::uint64_t num_games, std::uint64_t base_seed,
                                  std::uint64_t step_cap = kDefaultStepCap, double tau_contact = 1e-7);

enum class Player { one, two };

/// Unilateral deviations probed by exploit_test.
enum class Deviation { stay, uniform_random, corrupted_field };

std::string_view to_string(Deviation d);
inline constexpr Deviation kDeviationMenu[] = {Deviation::stay, Deviation::uniform_random, Deviation::corrupted_field};

/// Same as estimate_value with one player's strategy replaced by a deviation.
/// The corrupted field is u plus seeded uniform noise of amplitude 0.1 * range(u).
MonteCarloEstimate exploit_test(const ProblemSpec& spec, const ScalarField& u, NodeIndex x0, Player deviating,
                                Deviation deviation, std::uint64_t num_games, std::uint64_t base_seed,
                                std::uint64_t step_cap = kDefaultStepCap, double tau_contact = 1e-7);

/// Consecutive positions are ball neighbors and the payoff matches the exit kind.
bool trace_valid(const ProblemSpec& spec, const GameTrace& trace);

/// Largest |(u(argmax) + u(argmin))/2 - u(x)| over the non-stopped interior
/// positions of a trace: the one-step drift of u under the pull profile.
double profile_drift(const ProblemSpec& spec, const ScalarField& u, const GameTrace& trace);

/// Writes `step,node_index,x,[y,]coin,action` rows with a header line.
void write_trace_csv(std::ostream& os, const ProblemSpec& spec, const GameTrace& trace);

}  // namespace infobs
