#pragma once

#include "herdsim/decision.hpp"
#include "herdsim/signal_model.hpp"

#include <optional>
#include <vector>

namespace herdsim {

// Public knowledge before player `period` moves: the realized action history,
// the public odds of state R (prior odds times the likelihood ratios of the
// observed actions) and the congestion fraction under the active scope.
struct PublicState {
    History history;
    Rat public_odds;
    Rat f;
    int period = 1;
    bool on_path = true;  // false once a zero-probability action was observed

    double public_llr() const { return std::log(to_double(public_odds)); }
};

PublicState initial_state(const SignalModel& model, const CongestionSpec& spec);

// A pure strategy for one player: signal index -> action. Monotone signal
// ordering makes every best response a threshold rule; `constant` marks the
// uninformative case.
struct Strategy {
    std::vector<Act> action;  // indexed by signal

    bool constant() const {
        for (Act a : action)
            if (a != action.front()) return false;
        return true;
    }
    bool informative() const { return !constant(); }
    bool operator==(const Strategy&) const = default;
};

Strategy compute_strategy(const PublicState& state, const SignalModel& model,
                          const CongestionSpec& spec, Tiebreak tiebreak);

// Likelihood ratio contributed by observing `act` under `strategy`:
// Pr(act|R)/Pr(act|L) with Pr(act|theta) summed over the signals mapped to
// act. A zero-probability action is off-path: passive beliefs, factor 1.
struct ActionUpdate {
    Rat odds_factor = 1;
    Rat prob_r = 0;  // Pr(act | R)
    Rat prob_l = 0;  // Pr(act | L)
    bool on_path = true;
};

ActionUpdate action_update(const Strategy& strategy, const SignalModel& model, Act act);

// Appends the observed action: the public odds pick up the action's
// likelihood ratio (nothing for off-path actions) while f is recomputed
// mechanically from the realized history either way.
PublicState advance(const PublicState& state, Act observed, const SignalModel& model,
                    const CongestionSpec& spec, Tiebreak tiebreak);

struct TraceRow {
    int period = 1;
    History history;    // realized prefix the player observes
    Rat public_odds;
    double public_llr = 0.0;
    Rat f;
    bool on_path = true;
    Strategy strategy;
    ActionUpdate update_l, update_r;  // increments induced by each action
    bool informative = true;
    bool herd = false;  // strategy constant and equal to the previous action
    std::optional<Act> realized;
};

// Rows for periods 1..history.size()+1 along the realized history.
std::vector<TraceRow> trace(const SignalModel& model, const CongestionSpec& spec,
                            Tiebreak tiebreak, const History& history);

struct HorizonTooSmall : std::runtime_error {
    explicit HorizonTooSmall(const std::string& msg) : std::runtime_error(msg) {}
};

// Herding after a^t: the strategy after a^t is constant and equal to a_t.
// Cascade after a^t: strategies stay constant along every continuation. The
// exhaustive check expands all continuations up to `horizon`; the analytic
// certificate additionally covers every horizon by checking constancy of the
// (frozen-odds) strategy at every congestion fraction any continuation could
// produce. Cascades are only reported as certain when the certificate holds.
struct DetectReport {
    std::vector<bool> informative;       // index i: player i+1 informative
    std::optional<int> herd_start;       // first period of the realized herd
    std::optional<int> cascade_start;    // first uninformative period, certified
    bool cascade_certified = false;
    // strategies constant along all continuations of the full history up to
    // horizon, but no all-horizons certificate applies
    bool uninformative_through_horizon = false;
    int checked_horizon = 0;
};

DetectReport detect(const SignalModel& model, const CongestionSpec& spec, Tiebreak tiebreak,
                    const History& history, int horizon);

}  // namespace herdsim
