#pragma once

#include "herdsim/equilibrium.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace herdsim {

struct EventSpec {
    enum class Kind {
        HerdStartedBy,        // a herd is running by period t (some u < t herds)
        ActionInformative,    // player i's strategy responds to the signal
        MatchesPredecessor,   // a_i == a_{i-1}
        MatchesState,         // a_i == theta
        HistoryEquals,        // realized history starts with `prefix`
    };
    Kind kind = Kind::HistoryEquals;
    int index = 0;
    History prefix;  // HistoryEquals only; empty prefix = always true

    int required_depth() const;
    std::string to_string() const;
    static EventSpec herd_started_by(int t) { return {Kind::HerdStartedBy, t, {}}; }
    static EventSpec informative(int i) { return {Kind::ActionInformative, i, {}}; }
    static EventSpec matches_predecessor(int i) { return {Kind::MatchesPredecessor, i, {}}; }
    static EventSpec matches_state(int i) { return {Kind::MatchesState, i, {}}; }
    static EventSpec history_equals(History h) {
        return {Kind::HistoryEquals, 0, std::move(h)};
    }
    static EventSpec always() { return history_equals({}); }
    // Text forms: "herdstartedby:3" "informative:2" "matchespredecessor:2"
    // "matchesstate:1" "history:LRR" "always"
    static EventSpec parse(const std::string& text);
};

struct ConditionProbabilityZero : std::runtime_error {
    ConditionProbabilityZero() : std::runtime_error("conditioning event has probability zero") {}
};

struct ProbabilityResult {
    Rat exact;
    double value = 0.0;
    std::optional<EventSpec> conditioned_on;
    Rat joint;            // P(event and condition); equals `exact` when unconditioned
    Rat condition_prob;   // P(condition); 1 when unconditioned
};

inline constexpr int kHorizonHardCap = 14;
inline constexpr int kHorizonSoftCap = 10;  // larger horizons emit a memory warning

// Exact event probability over state x signal sequences. Signal sequences
// leading to the same action history share strategies and event outcomes, so
// the sum is aggregated over the binary history tree; the literal
// signal-sequence walk below reproduces it term by term.
ProbabilityResult exact_probability(const SignalModel& model, const CongestionSpec& spec,
                                    Tiebreak tiebreak, int horizon, const EventSpec& event,
                                    const std::optional<EventSpec>& condition = std::nullopt);

// Reference route: walks every signal sequence individually.
ProbabilityResult exact_probability_by_signal_paths(
    const SignalModel& model, const CongestionSpec& spec, Tiebreak tiebreak, int horizon,
    const EventSpec& event, const std::optional<EventSpec>& condition = std::nullopt);

struct ConditionResult {
    std::string name;
    bool applicable = true;
    bool holds = false;        // exact verdict
    bool holds_float = false;  // double-precision verdict
    Rat product = 1;           // exp of the inequality's left side; holds iff < 1
    double llr_sum = 0.0;
    bool boundary_uncertain = false;  // |product - 1| < 1e-9 in double arithmetic
};

struct ConditionReport {
    std::vector<ConditionResult> results;
    std::vector<std::string> implication_errors;  // must stay empty
    int family_checked_up_to = 0;

    const ConditionResult* find(const std::string& name) const;
    bool holds(const std::string& name) const;
    bool all_hold(const std::vector<std::string>& names) const;
};

// Evaluates every named inequality the equilibrium results rest on, with the
// exact odds-product margin. Inapplicable entries (wrong signal variant) are
// marked rather than dropped.
ConditionReport check_conditions(const SignalModel& model, const CongestionSpec& spec,
                                 int horizon);

// Named condition sets usable as scan targets / hypothesis bundles.
std::vector<std::string> condition_set(const std::string& set_name);

struct InclusionReport {
    bool hypotheses_met = false;
    bool inclusion_holds = false;         // herd histories: k=0 set within k>0 set
    bool uninformative_inclusion = false; // constant-strategy histories likewise
    std::vector<History> counterexamples; // k=0 herd histories missing under k>0
    std::vector<History> difference_minimal;  // minimal k>0-only herd histories
    Rat difference_mass = 0;  // first-entry probability of the difference set
                              // under the k>0 equilibrium measure
    int players = 0;
};

InclusionReport verify_herding_inclusion(const SignalModel& model,
                                         const CongestionSpec& k_pos_spec, Tiebreak tiebreak,
                                         int horizon);

struct MonteCarloResult {
    std::int64_t runs = 0;
    std::int64_t hits = 0;
    double frequency = 0.0;
    double ci_low = 0.0;   // 95% normal-approximation binomial interval
    double ci_high = 0.0;
    std::uint64_t seed = 0;
};

MonteCarloResult monte_carlo(const SignalModel& model, const CongestionSpec& spec,
                             Tiebreak tiebreak, int horizon, const EventSpec& event,
                             std::int64_t runs, std::uint64_t seed);

struct DiscountedCorrectResult {
    Rat exact;
    double value = 0.0;
    std::vector<Rat> per_period;  // P(a_i = theta), i = 1..horizon
};

// Discounted probability of correct decisions:
// sum_i delta^i P(a_i = theta) / sum_i delta^i.
DiscountedCorrectResult discounted_correct(const SignalModel& model, const CongestionSpec& spec,
                                           Tiebreak tiebreak, int horizon, const Rat& delta);

struct GridSpec {
    SignalVariant variant = SignalVariant::Baseline4;
    std::vector<Rat> p0, pS, Q, q, k;
    std::vector<Rat> ps, pSigma, eta;  // Appendix6 only
    CongestionMode mode = CongestionMode::Differ;
    CongestionScope scope = AllPredecessors{};
};

struct EmptyGrid : std::runtime_error {
    EmptyGrid() : std::runtime_error("scan grid has an empty dimension") {}
};

struct ScanCell {
    ModelParams params;
    Rat k;
    std::vector<std::string> failed;  // conditions from the target set that fail
};

struct ScanReport {
    int total = 0;
    int invalid = 0;
    int satisfied = 0;
    std::vector<ScanCell> satisfying;
};

ScanReport scan_parameters(const GridSpec& grid, const std::string& target_set, int horizon);

// Deterministic per-run stream derivation for Monte Carlo and tests.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace herdsim
