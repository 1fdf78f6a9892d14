#include "herdsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace herdsim {

int EventSpec::required_depth() const {
    switch (kind) {
        case Kind::HerdStartedBy: return std::max(0, index - 1);
        case Kind::ActionInformative: return index - 1;
        case Kind::MatchesPredecessor: return index;
        case Kind::MatchesState: return index;
        case Kind::HistoryEquals: return static_cast<int>(prefix.size());
    }
    return 0;
}

std::string EventSpec::to_string() const {
    switch (kind) {
        case Kind::HerdStartedBy: return "herdstartedby:" + std::to_string(index);
        case Kind::ActionInformative: return "informative:" + std::to_string(index);
        case Kind::MatchesPredecessor: return "matchespredecessor:" + std::to_string(index);
        case Kind::MatchesState: return "matchesstate:" + std::to_string(index);
        case Kind::HistoryEquals:
            return prefix.empty() ? "always" : "history:" + format_history(prefix);
    }
    return "?";
}

namespace {

void validate_indices(const EventSpec& e) {
    switch (e.kind) {
        case EventSpec::Kind::HerdStartedBy:
        case EventSpec::Kind::ActionInformative:
        case EventSpec::Kind::MatchesState:
            if (e.index < 1) throw std::invalid_argument("event index must be >= 1");
            break;
        case EventSpec::Kind::MatchesPredecessor:
            if (e.index < 2)
                throw std::invalid_argument("matchespredecessor needs a period >= 2");
            break;
        case EventSpec::Kind::HistoryEquals: break;
    }
}

}  // namespace

EventSpec EventSpec::parse(const std::string& text) {
    if (text == "always") return always();
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("bad event '" + text + "' (expected kind:arg or 'always')");
    const std::string kind = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    EventSpec spec;
    if (kind == "history") {
        spec = history_equals(parse_history(arg));
    } else {
        int idx = 0;
        try {
            idx = std::stoi(arg);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad event index in '" + text + "'");
        }
        if (kind == "herdstartedby")
            spec = herd_started_by(idx);
        else if (kind == "informative")
            spec = informative(idx);
        else if (kind == "matchespredecessor")
            spec = matches_predecessor(idx);
        else if (kind == "matchesstate")
            spec = matches_state(idx);
        else
            throw std::invalid_argument("unknown event kind '" + kind + "'");
    }
    validate_indices(spec);
    return spec;
}

namespace {

void validate_event(const EventSpec& e, int horizon) {
    validate_indices(e);
    if (e.required_depth() > horizon)
        throw HorizonTooSmall("event " + e.to_string() + " needs horizon >= " +
                              std::to_string(e.required_depth()) + ", got " +
                              std::to_string(horizon));
}

void validate_horizon(int horizon) {
    if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
    if (horizon > kHorizonHardCap)
        throw HorizonTooSmall("horizon " + std::to_string(horizon) + " above the hard cap " +
                              std::to_string(kHorizonHardCap));
}

struct PathFlags {
    std::vector<Act> path;
    std::vector<bool> informative;  // index d: player d+1
    std::vector<bool> herd;         // index u-1: herding after the length-u prefix
};

bool evaluate_event(const EventSpec& e, const PathFlags& flags, State theta) {
    switch (e.kind) {
        case EventSpec::Kind::HerdStartedBy: {
            const int upto = std::min<int>(e.index - 1, static_cast<int>(flags.herd.size()));
            for (int u = 1; u <= upto; ++u)
                if (flags.herd[static_cast<size_t>(u - 1)]) return true;
            return false;
        }
        case EventSpec::Kind::ActionInformative:
            return flags.informative[static_cast<size_t>(e.index - 1)];
        case EventSpec::Kind::MatchesPredecessor:
            return flags.path[static_cast<size_t>(e.index - 1)] ==
                   flags.path[static_cast<size_t>(e.index - 2)];
        case EventSpec::Kind::MatchesState:
            return flags.path[static_cast<size_t>(e.index - 1)] == act_of(theta);
        case EventSpec::Kind::HistoryEquals:
            for (size_t i = 0; i < e.prefix.size(); ++i)
                if (flags.path[i] != e.prefix[i]) return false;
            return true;
    }
    return false;
}

struct Accumulator {
    Rat joint_r = 0, joint_l = 0;  // event and condition
    Rat cond_r = 0, cond_l = 0;    // condition alone
};

void accumulate_leaf(Accumulator& acc, const PathFlags& flags, const Rat& p_r, const Rat& p_l,
                     const EventSpec& event, const EventSpec& condition) {
    for (State theta : {State::R, State::L}) {
        if (!evaluate_event(condition, flags, theta)) continue;
        const Rat& p = theta == State::R ? p_r : p_l;
        (theta == State::R ? acc.cond_r : acc.cond_l) += p;
        if (evaluate_event(event, flags, theta))
            (theta == State::R ? acc.joint_r : acc.joint_l) += p;
    }
}

ProbabilityResult finish(const SignalModel& model, Accumulator& acc,
                         const std::optional<EventSpec>& condition) {
    const Rat p0 = model.prior();
    ProbabilityResult res;
    res.joint = p0 * acc.joint_r + (1 - p0) * acc.joint_l;
    res.condition_prob = p0 * acc.cond_r + (1 - p0) * acc.cond_l;
    res.conditioned_on = condition;
    if (condition) {
        if (res.condition_prob == 0) throw ConditionProbabilityZero();
        res.exact = res.joint / res.condition_prob;
    } else {
        res.exact = res.joint;
    }
    res.value = to_double(res.exact);
    return res;
}

// Depth-first walk of the action-history tree; path probabilities are the
// per-state likelihoods of the realized actions under the computed strategies.
void walk_history_tree(const PublicState& state, const SignalModel& model,
                       const CongestionSpec& spec, Tiebreak tiebreak, int depth,
                       PathFlags& flags, Rat p_r, Rat p_l,
                       const std::function<void(const PathFlags&, const Rat&, const Rat&)>& leaf) {
    const Strategy strat = compute_strategy(state, model, spec, tiebreak);
    flags.informative.push_back(strat.informative());
    if (!state.history.empty())
        flags.herd.push_back(strat.constant() && strat.action.front() == state.history.back());

    if (depth == 0) {
        leaf(flags, p_r, p_l);
    } else {
        for (Act a : {Act::L, Act::R}) {
            const ActionUpdate u = action_update(strat, model, a);
            if (u.prob_r == 0 && u.prob_l == 0) continue;  // off-path branch has no mass
            flags.path.push_back(a);
            walk_history_tree(advance(state, a, model, spec, tiebreak), model, spec, tiebreak,
                              depth - 1, flags, p_r * u.prob_r, p_l * u.prob_l, leaf);
            flags.path.pop_back();
        }
    }

    flags.informative.pop_back();
    if (!state.history.empty()) flags.herd.pop_back();
}

}  // namespace

ProbabilityResult exact_probability(const SignalModel& model, const CongestionSpec& spec,
                                    Tiebreak tiebreak, int horizon, const EventSpec& event,
                                    const std::optional<EventSpec>& condition) {
    spec.check();
    validate_horizon(horizon);
    validate_event(event, horizon);
    if (condition) validate_event(*condition, horizon);
    const EventSpec cond = condition.value_or(EventSpec::always());
    const int depth = std::max(event.required_depth(), cond.required_depth());

    Accumulator acc;
    PathFlags flags;
    walk_history_tree(initial_state(model, spec), model, spec, tiebreak, depth, flags, Rat(1),
                      Rat(1), [&](const PathFlags& fl, const Rat& p_r, const Rat& p_l) {
                          accumulate_leaf(acc, fl, p_r, p_l, event, cond);
                      });
    return finish(model, acc, condition);
}

namespace {

void walk_signal_paths(const PublicState& state, const SignalModel& model,
                       const CongestionSpec& spec, Tiebreak tiebreak, int depth,
                       PathFlags& flags, Rat p_r, Rat p_l, Accumulator& acc,
                       const EventSpec& event, const EventSpec& cond) {
    const Strategy strat = compute_strategy(state, model, spec, tiebreak);
    flags.informative.push_back(strat.informative());
    if (!state.history.empty())
        flags.herd.push_back(strat.constant() && strat.action.front() == state.history.back());

    if (depth == 0) {
        accumulate_leaf(acc, flags, p_r, p_l, event, cond);
    } else {
        for (Signal s = 0; s < model.num_signals(); ++s) {
            const Act a = strat.action[static_cast<size_t>(s)];
            flags.path.push_back(a);
            walk_signal_paths(advance(state, a, model, spec, tiebreak), model, spec, tiebreak,
                              depth - 1, flags, p_r * model.signal_prob(s, State::R),
                              p_l * model.signal_prob(s, State::L), acc, event, cond);
            flags.path.pop_back();
        }
    }

    flags.informative.pop_back();
    if (!state.history.empty()) flags.herd.pop_back();
}

}  // namespace

ProbabilityResult exact_probability_by_signal_paths(const SignalModel& model,
                                                    const CongestionSpec& spec,
                                                    Tiebreak tiebreak, int horizon,
                                                    const EventSpec& event,
                                                    const std::optional<EventSpec>& condition) {
    spec.check();
    validate_horizon(horizon);
    validate_event(event, horizon);
    if (condition) validate_event(*condition, horizon);
    const EventSpec cond = condition.value_or(EventSpec::always());
    const int depth = std::max(event.required_depth(), cond.required_depth());

    Accumulator acc;
    PathFlags flags;
    walk_signal_paths(initial_state(model, spec), model, spec, tiebreak, depth, flags, Rat(1),
                      Rat(1), acc, event, cond);
    return finish(model, acc, condition);
}

namespace {

// Cutoff odds by the differ-mode formula regardless of the configured mode;
// the condition inequalities are all stated in terms of it.
Rat eq1_cutoff_odds(const Rat& k, const Rat& f) {
    return (1 - k + 2 * f * k) / (1 + k - 2 * f * k);
}

ConditionResult make_condition(std::string name, bool applicable, const Rat& product) {
    ConditionResult r;
    r.name = std::move(name);
    r.applicable = applicable;
    r.product = product;
    if (applicable) {
        r.holds = product < 1;
        const double p = to_double(product);
        r.llr_sum = std::log(p);
        r.holds_float = p < 1.0;
        r.boundary_uncertain = std::fabs(p - 1.0) < 1e-9;
    }
    return r;
}

}  // namespace

const ConditionResult* ConditionReport::find(const std::string& name) const {
    for (const auto& r : results)
        if (r.name == name) return &r;
    return nullptr;
}

bool ConditionReport::holds(const std::string& name) const {
    const auto* r = find(name);
    return r != nullptr && r->applicable && r->holds;
}

bool ConditionReport::all_hold(const std::vector<std::string>& names) const {
    return std::all_of(names.begin(), names.end(),
                       [&](const std::string& n) { return holds(n); });
}

ConditionReport check_conditions(const SignalModel& model, const CongestionSpec& spec,
                                 int horizon) {
    spec.check();
    validate_horizon(horizon);
    const LlrConstants c = LlrConstants::derive(model);
    const bool base = model.variant() == SignalVariant::Baseline4;
    const Rat one(1);
    const Rat& o0 = c.l0.odds;
    const Rat ck1 = eq1_cutoff_odds(spec.k, Rat(1));

    ConditionReport report;
    auto add = [&](std::string name, bool applicable, const Rat& product) {
        report.results.push_back(make_condition(std::move(name), applicable, product));
    };

    if (base) {
        const Rat &oQ = c.lQ.odds, &oq = c.lq.odds, &oQq = c.lQq.odds, &onQ = c.lNotQ.odds;
        add("weak_beats_prior", true, o0 / oq);
        add("strong_beats_prior", true, o0 / oQ);
        add("p2_keeps_confirming_strong", true, o0 * ck1 / (oQq * oQ));
        add("p2_strong_flips_pool", true, o0 * oQq / (oQ * ck1));
        add("pool_beats_weak", true, o0 * oq / oQq);
        add("strong_beats_pool_plus_conflation", true, o0 * oQq * onQ / oQ);
        add("differ_p2_follows_own_signal", true, o0 * oQq / (oq * ck1));
        add("differ_no_antiherd", true, o0 * ck1 / (oQq * oq));
        add("differ_herd_after_match", true, o0 * oQ * ck1 / (oQq * oQq));
        report.family_checked_up_to = (horizon + 1) / 2;
        for (int i = 1; i <= report.family_checked_up_to; ++i) {
            const Rat f(i + 1, 2 * i + 1);
            add("differ_herd_restart_cycle_" + std::to_string(i), true,
                o0 * oQq / (oq * eq1_cutoff_odds(spec.k, f)));
        }
        add("pool_beats_conflation", true, o0 * onQ / oQq);
        add("strong_conflation_beat_two_pools", true, o0 * oQq * oQq / (onQ * oQ));
        for (const char* n :
             {"six_weak_beats_prior", "six_medium_flips_pool", "six_pool_beats_weak",
              "six_herd_after_match", "six_conform_blocks_medium_flip",
              "six_conform_strong_flips_pool", "six_conform_strong_breaks_pool"})
            add(n, false, one);
    } else {
        const Rat &oQ = c.lQ.odds, &oq = c.lq.odds, &oe = c.lEta.odds;
        const Rat &oQqe = c.lQqEta.odds, &onqQ = c.lNotqQ.odds, &onQ = c.lNotQ.odds;
        add("six_weak_beats_prior", true, o0 / oe);
        add("six_medium_flips_pool", true, o0 * oQqe / oq);
        add("six_pool_beats_weak", true, o0 * oe / oQqe);
        add("six_herd_after_match", true, o0 * oQ / (oQqe * onqQ));
        add("six_conform_blocks_medium_flip", true, o0 * oq / (oQqe * ck1));
        add("six_conform_strong_flips_pool", true, o0 * oQqe * onQ * ck1 / oQ);
        add("six_conform_strong_breaks_pool", true, o0 * oQqe * ck1 / oQ);
        for (const char* n :
             {"weak_beats_prior", "strong_beats_prior", "p2_keeps_confirming_strong", "p2_strong_flips_pool",
              "pool_beats_weak", "strong_beats_pool_plus_conflation", "differ_p2_follows_own_signal",
              "differ_no_antiherd", "differ_herd_after_match", "pool_beats_conflation", "strong_conflation_beat_two_pools"})
            add(n, false, one);
    }

    // Implication edges used by the equilibrium arguments; a violation means
    // an internal inconsistency, not a property of the parameters.
    std::vector<std::pair<std::string, std::string>> edges = {
        {"weak_beats_prior", "strong_beats_prior"},
        {"strong_beats_pool_plus_conflation", "p2_strong_flips_pool"},
        {"differ_p2_follows_own_signal", "p2_strong_flips_pool"},
        {"differ_herd_after_match", "differ_no_antiherd"},
        {"differ_herd_restart_cycle_1", "differ_p2_follows_own_signal"},
        {"six_conform_strong_flips_pool", "six_conform_strong_breaks_pool"},
    };
    for (int i = 2; i <= report.family_checked_up_to; ++i)
        edges.emplace_back("differ_herd_restart_cycle_" + std::to_string(i),
                           "differ_herd_restart_cycle_" + std::to_string(i - 1));
    for (const auto& [ante, cons] : edges) {
        const auto* a = report.find(ante);
        const auto* b = report.find(cons);
        if (a == nullptr || b == nullptr || !a->applicable || !b->applicable) continue;
        if (a->holds && !b->holds)
            report.implication_errors.push_back(ante + " holds but " + cons + " fails");
    }
    return report;
}

std::vector<std::string> condition_set(const std::string& set_name) {
    static const std::map<std::string, std::vector<std::string>> sets = {
        {"p2_informative", {"weak_beats_prior", "p2_keeps_confirming_strong", "p2_strong_flips_pool"}},
        {"k0_p3_informative", {"pool_beats_weak", "strong_beats_pool_plus_conflation"}},
        {"herding_jump", {"differ_p2_follows_own_signal", "differ_herd_after_match"}},
        {"inclusion_guard", {"pool_beats_conflation"}},
        {"deep_inclusion_guard", {"strong_conflation_beat_two_pools"}},
        {"baseline_core",
         {"weak_beats_prior", "p2_keeps_confirming_strong", "p2_strong_flips_pool", "pool_beats_weak",
          "strong_beats_pool_plus_conflation", "differ_p2_follows_own_signal",
          "differ_herd_after_match", "pool_beats_conflation"}},
        {"baseline_full",
         {"weak_beats_prior", "p2_keeps_confirming_strong", "p2_strong_flips_pool", "pool_beats_weak",
          "strong_beats_pool_plus_conflation", "differ_p2_follows_own_signal",
          "differ_herd_after_match", "pool_beats_conflation", "strong_conflation_beat_two_pools"}},
        {"six_zero_cost_herd",
         {"six_weak_beats_prior", "six_medium_flips_pool", "six_pool_beats_weak",
          "six_herd_after_match"}},
        {"six_conform_informative",
         {"six_weak_beats_prior", "six_conform_blocks_medium_flip", "six_conform_strong_flips_pool"}},
        {"six_full",
         {"six_weak_beats_prior", "six_medium_flips_pool", "six_pool_beats_weak",
          "six_herd_after_match", "six_conform_blocks_medium_flip",
          "six_conform_strong_flips_pool"}},
    };
    const auto it = sets.find(set_name);
    if (it == sets.end()) throw std::invalid_argument("unknown condition set '" + set_name + "'");
    return it->second;
}

namespace {

struct HistoryWalk {
    std::set<std::string> herd;           // constant strategy repeating the last action
    std::set<std::string> uninformative;  // constant strategy
    std::map<std::string, Rat> reach;     // unconditional reach probability
};

void walk_histories(const PublicState& state, const SignalModel& model,
                    const CongestionSpec& spec, Tiebreak tiebreak, int max_len, Rat p_r,
                    Rat p_l, HistoryWalk& out) {
    const Strategy strat = compute_strategy(state, model, spec, tiebreak);
    const std::string key = format_history(state.history);
    out.reach[key] = model.prior() * p_r + (1 - model.prior()) * p_l;
    if (strat.constant()) {
        out.uninformative.insert(key);
        if (!state.history.empty() && strat.action.front() == state.history.back())
            out.herd.insert(key);
    }
    if (static_cast<int>(state.history.size()) >= max_len) return;
    for (Act a : {Act::L, Act::R}) {
        const ActionUpdate u = action_update(strat, model, a);
        walk_histories(advance(state, a, model, spec, tiebreak), model, spec, tiebreak, max_len,
                       p_r * u.prob_r, p_l * u.prob_l, out);
    }
}

}  // namespace

InclusionReport verify_herding_inclusion(const SignalModel& model,
                                         const CongestionSpec& k_pos_spec, Tiebreak tiebreak,
                                         int horizon) {
    k_pos_spec.check();
    validate_horizon(horizon);
    CongestionSpec k0 = k_pos_spec;
    k0.k = 0;
    k0.k_overrides.clear();

    const ConditionReport conds = check_conditions(model, k_pos_spec, horizon);
    InclusionReport report;
    report.players = horizon;
    if (model.variant() == SignalVariant::Baseline4) {
        report.hypotheses_met =
            k_pos_spec.k > 0 && conds.all_hold(condition_set("baseline_full"));
    } else {
        report.hypotheses_met = k_pos_spec.k > 0 && conds.all_hold(condition_set("six_full"));
    }

    HistoryWalk w0, wp;
    walk_histories(initial_state(model, k0), model, k0, tiebreak, horizon - 1, Rat(1), Rat(1),
                   w0);
    walk_histories(initial_state(model, k_pos_spec), model, k_pos_spec, tiebreak, horizon - 1,
                   Rat(1), Rat(1), wp);

    report.inclusion_holds = true;
    for (const auto& h : w0.herd) {
        if (wp.herd.count(h) == 0) {
            report.inclusion_holds = false;
            report.counterexamples.push_back(parse_history(h));
        }
    }
    report.uninformative_inclusion = std::includes(
        wp.uninformative.begin(), wp.uninformative.end(), w0.uninformative.begin(),
        w0.uninformative.end());

    // Minimal histories herding only under k>0, and their first-entry mass
    // under the k>0 equilibrium measure.
    std::set<std::string> difference;
    for (const auto& h : wp.herd)
        if (w0.herd.count(h) == 0) difference.insert(h);
    for (const auto& h : difference) {
        bool minimal = true;
        for (size_t len = 0; len < h.size() && minimal; ++len)
            if (difference.count(h.substr(0, len)) > 0) minimal = false;
        if (minimal) {
            report.difference_minimal.push_back(parse_history(h));
            report.difference_mass += wp.reach.at(h);
        }
    }
    return report;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

// Uniform integer in [0, bound) from raw 64-bit draws, exact via rejection.
std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % bound;
}

struct SamplerTables {
    std::uint64_t denom = 1;
    std::vector<std::uint64_t> cumulative;  // per signal, scaled to denom
};

SamplerTables sampler_for(const SignalModel& model, State theta) {
    BigInt denom = 1;
    for (Signal s = 0; s < model.num_signals(); ++s)
        denom = boost::multiprecision::lcm(
            denom, boost::multiprecision::denominator(model.signal_prob(s, theta)));
    if (denom > BigInt(std::numeric_limits<std::uint64_t>::max()))
        throw std::runtime_error("signal distribution denominator too large to sample");
    SamplerTables t;
    t.denom = static_cast<std::uint64_t>(denom);
    BigInt acc = 0;
    for (Signal s = 0; s < model.num_signals(); ++s) {
        const Rat p = model.signal_prob(s, theta);
        acc += boost::multiprecision::numerator(p) *
               (denom / boost::multiprecision::denominator(p));
        t.cumulative.push_back(static_cast<std::uint64_t>(acc));
    }
    return t;
}

struct McNode {
    Strategy strategy;
    bool informative = true;
    bool herd = false;
    std::unique_ptr<McNode> child[2];
};

std::unique_ptr<McNode> build_mc_tree(const PublicState& state, const SignalModel& model,
                                      const CongestionSpec& spec, Tiebreak tiebreak,
                                      int depth) {
    auto node = std::make_unique<McNode>();
    node->strategy = compute_strategy(state, model, spec, tiebreak);
    node->informative = node->strategy.informative();
    node->herd = !state.history.empty() && node->strategy.constant() &&
                 node->strategy.action.front() == state.history.back();
    if (depth > 0) {
        node->child[0] = build_mc_tree(advance(state, Act::L, model, spec, tiebreak), model,
                                       spec, tiebreak, depth - 1);
        node->child[1] = build_mc_tree(advance(state, Act::R, model, spec, tiebreak), model,
                                       spec, tiebreak, depth - 1);
    }
    return node;
}

}  // namespace

MonteCarloResult monte_carlo(const SignalModel& model, const CongestionSpec& spec,
                             Tiebreak tiebreak, int horizon, const EventSpec& event,
                             std::int64_t runs, std::uint64_t seed) {
    spec.check();
    validate_horizon(horizon);
    validate_event(event, horizon);
    if (runs < 1) throw std::invalid_argument("monte_carlo needs runs >= 1");

    const int depth = event.required_depth();
    const auto root = build_mc_tree(initial_state(model, spec), model, spec, tiebreak, depth);
    const SamplerTables table_l = sampler_for(model, State::L);
    const SamplerTables table_r = sampler_for(model, State::R);
    const Rat p0 = model.prior();
    const auto p0_num = boost::multiprecision::numerator(p0);
    const auto p0_den = boost::multiprecision::denominator(p0);
    if (p0_den > BigInt(std::numeric_limits<std::uint64_t>::max()))
        throw std::runtime_error("prior denominator too large to sample");
    const std::uint64_t prior_den = static_cast<std::uint64_t>(p0_den);
    const std::uint64_t prior_num = static_cast<std::uint64_t>(p0_num);

    std::int64_t hits = 0;
    PathFlags flags;
    const std::uint64_t stream_base = splitmix64(seed);
    for (std::int64_t run = 0; run < runs; ++run) {
        // independent stream per run so that any execution order agrees;
        // mixing the base seed first keeps nearby seeds disjoint too
        std::mt19937_64 rng(splitmix64(stream_base + static_cast<std::uint64_t>(run)));
        const State theta =
            bounded_rand(rng, prior_den) < prior_num ? State::R : State::L;
        const SamplerTables& table = theta == State::R ? table_r : table_l;

        flags.path.clear();
        flags.informative.clear();
        flags.herd.clear();
        const McNode* node = root.get();
        flags.informative.push_back(node->informative);
        for (int d = 0; d < depth; ++d) {
            const std::uint64_t draw = bounded_rand(rng, table.denom);
            Signal s = 0;
            while (table.cumulative[static_cast<size_t>(s)] <= draw) ++s;
            const Act a = node->strategy.action[static_cast<size_t>(s)];
            flags.path.push_back(a);
            node = node->child[a == Act::L ? 0 : 1].get();
            flags.informative.push_back(node->informative);
            flags.herd.push_back(node->herd);
        }
        if (evaluate_event(event, flags, theta)) ++hits;
    }

    MonteCarloResult res;
    res.runs = runs;
    res.hits = hits;
    res.seed = seed;
    res.frequency = static_cast<double>(hits) / static_cast<double>(runs);
    const double se =
        std::sqrt(std::max(res.frequency * (1 - res.frequency), 0.0) / static_cast<double>(runs));
    res.ci_low = res.frequency - 1.959963984540054 * se;
    res.ci_high = res.frequency + 1.959963984540054 * se;
    return res;
}

DiscountedCorrectResult discounted_correct(const SignalModel& model, const CongestionSpec& spec,
                                           Tiebreak tiebreak, int horizon, const Rat& delta) {
    if (delta <= 0 || delta >= 1)
        throw std::invalid_argument("delta must lie in (0,1), got " + format_rational(delta));
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    validate_horizon(horizon);

    DiscountedCorrectResult res;
    Rat weighted = 0, total_weight = 0, weight = 1;
    for (int i = 1; i <= horizon; ++i) {
        weight *= delta;
        const ProbabilityResult p =
            exact_probability(model, spec, tiebreak, horizon, EventSpec::matches_state(i));
        res.per_period.push_back(p.exact);
        weighted += weight * p.exact;
        total_weight += weight;
    }
    res.exact = weighted / total_weight;
    res.value = to_double(res.exact);
    return res;
}

ScanReport scan_parameters(const GridSpec& grid, const std::string& target_set, int horizon) {
    const std::vector<std::string> targets = condition_set(target_set);
    const bool base = grid.variant == SignalVariant::Baseline4;
    auto require = [](const std::vector<Rat>& v) {
        if (v.empty()) throw EmptyGrid();
    };
    require(grid.p0);
    require(grid.pS);
    require(grid.Q);
    require(grid.q);
    require(grid.k);
    if (!base) {
        require(grid.ps);
        require(grid.pSigma);
        require(grid.eta);
    }
    const std::vector<Rat> ones{Rat(0)};
    const auto& ps_list = base ? ones : grid.ps;
    const auto& psig_list = base ? ones : grid.pSigma;
    const auto& eta_list = base ? ones : grid.eta;

    ScanReport report;
    for (const Rat& p0 : grid.p0)
        for (const Rat& pS : grid.pS)
            for (const Rat& ps : ps_list)
                for (const Rat& psig : psig_list)
                    for (const Rat& Q : grid.Q)
                        for (const Rat& q : grid.q)
                            for (const Rat& eta : eta_list)
                                for (const Rat& k : grid.k) {
                                    ++report.total;
                                    ModelParams params{grid.variant, p0, pS, Q,
                                                       q,            ps, psig, eta};
                                    bool structural_ok = true;
                                    for (const auto& chk : SignalModel::validate(params))
                                        if (chk.structural && !chk.ok) structural_ok = false;
                                    if (!structural_ok || k < 0 || k >= 1) {
                                        ++report.invalid;
                                        continue;
                                    }
                                    const SignalModel model = SignalModel::build(params);
                                    CongestionSpec spec;
                                    spec.k = k;
                                    spec.mode = grid.mode;
                                    spec.scope = grid.scope;
                                    const ConditionReport conds =
                                        check_conditions(model, spec, horizon);
                                    ScanCell cell{params, k, {}};
                                    for (const auto& name : targets)
                                        if (!conds.holds(name)) cell.failed.push_back(name);
                                    if (cell.failed.empty()) {
                                        ++report.satisfied;
                                        report.satisfying.push_back(std::move(cell));
                                    }
                                }
    return report;
}

}  // namespace herdsim
