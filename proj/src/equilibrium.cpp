#include "herdsim/equilibrium.hpp"

#include <functional>

namespace herdsim {

PublicState initial_state(const SignalModel& model, const CongestionSpec& spec) {
    PublicState s;
    s.public_odds = model.prior_odds();
    s.f = congestion_fraction(s.history, 1, spec.scope);
    s.period = 1;
    s.on_path = true;
    return s;
}

Strategy compute_strategy(const PublicState& state, const SignalModel& model,
                          const CongestionSpec& spec, Tiebreak tiebreak) {
    Strategy strat;
    strat.action.reserve(static_cast<size_t>(model.num_signals()));
    for (Signal s = 0; s < model.num_signals(); ++s) {
        const Rat private_odds = state.public_odds * model.odds_increment(s);
        strat.action.push_back(best_response(private_odds, state.f, spec, state.period, tiebreak));
    }
    return strat;
}

ActionUpdate action_update(const Strategy& strategy, const SignalModel& model, Act act) {
    ActionUpdate u;
    for (Signal s = 0; s < model.num_signals(); ++s) {
        if (strategy.action[static_cast<size_t>(s)] != act) continue;
        u.prob_r += model.signal_prob(s, State::R);
        u.prob_l += model.signal_prob(s, State::L);
    }
    // Signals have full support under both states, so the probabilities are
    // zero under both states or neither.
    if (u.prob_r == 0 && u.prob_l == 0) {
        u.on_path = false;
        u.odds_factor = 1;
    } else {
        u.odds_factor = u.prob_r / u.prob_l;
    }
    return u;
}

PublicState advance(const PublicState& state, Act observed, const SignalModel& model,
                    const CongestionSpec& spec, Tiebreak tiebreak) {
    const Strategy strat = compute_strategy(state, model, spec, tiebreak);
    const ActionUpdate u = action_update(strat, model, observed);
    PublicState next;
    next.history = state.history;
    next.history.push_back(observed);
    next.public_odds = state.public_odds * u.odds_factor;
    next.period = state.period + 1;
    next.f = congestion_fraction(next.history, next.period, spec.scope);
    next.on_path = state.on_path && u.on_path;
    return next;
}

std::vector<TraceRow> trace(const SignalModel& model, const CongestionSpec& spec,
                            Tiebreak tiebreak, const History& history) {
    spec.check();
    std::vector<TraceRow> rows;
    rows.reserve(history.size() + 1);
    PublicState state = initial_state(model, spec);
    for (size_t t = 0; t <= history.size(); ++t) {
        TraceRow row;
        row.period = state.period;
        row.history = state.history;
        row.public_odds = state.public_odds;
        row.public_llr = state.public_llr();
        row.f = state.f;
        row.on_path = state.on_path;
        row.strategy = compute_strategy(state, model, spec, tiebreak);
        row.update_l = action_update(row.strategy, model, Act::L);
        row.update_r = action_update(row.strategy, model, Act::R);
        row.informative = row.strategy.informative();
        row.herd = !state.history.empty() && row.strategy.constant() &&
                   row.strategy.action.front() == state.history.back();
        if (t < history.size()) {
            row.realized = history[t];
            state = advance(state, history[t], model, spec, tiebreak);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

// All-horizons certificate for a node whose strategy is constant. Off-path
// and on-path actions alike leave the public odds frozen there, so the only
// state a continuation can change is the congestion fraction. For the window
// scope the reachable fractions are exactly {0, 1/m, ..., 1}; constancy at
// each certifies the cascade. Other scopes can approach any fraction in
// [0,1], so constancy must hold uniformly, which by monotonicity of the
// cutoff in f reduces to the two endpoints delivering the same constant
// action.
bool certify_cascade(const Rat& public_odds, const SignalModel& model,
                     const CongestionSpec& spec, Tiebreak tiebreak, int period) {
    auto constant_at = [&](const Rat& f) -> std::optional<Act> {
        PublicState probe;
        probe.public_odds = public_odds;
        probe.f = f;
        probe.period = period;
        const Strategy s = compute_strategy(probe, model, spec, tiebreak);
        if (!s.constant()) return std::nullopt;
        return s.action.front();
    };
    // Per-period cost overrides break the one-probe argument; skip the
    // certificate when any override applies beyond this period.
    for (const auto& [p, kk] : spec.k_overrides) {
        if (p >= period && kk != spec.k) return false;
    }
    if (const auto* w = std::get_if<Window>(&spec.scope)) {
        // early periods span fewer than m predecessors, so every fraction
        // with denominator 1..m can arise
        for (int span = 1; span <= w->m; ++span)
            for (int j = 0; j <= span; ++j)
                if (!constant_at(Rat(j, span))) return false;
        return true;
    }
    const auto at0 = constant_at(Rat(0));
    const auto at1 = constant_at(Rat(1));
    return at0 && at1 && *at0 == *at1;
}

// Every continuation of `state` up to depth `horizon` has a constant
// strategy. Expands the binary action tree; public odds stay frozen while
// strategies remain constant.
bool uninformative_subtree(PublicState state, const SignalModel& model,
                           const CongestionSpec& spec, Tiebreak tiebreak, int horizon) {
    if (state.period > horizon) return true;
    const Strategy s = compute_strategy(state, model, spec, tiebreak);
    if (!s.constant()) return false;
    for (Act a : {Act::L, Act::R}) {
        if (!uninformative_subtree(advance(state, a, model, spec, tiebreak), model, spec,
                                   tiebreak, horizon))
            return false;
    }
    return true;
}

}  // namespace

DetectReport detect(const SignalModel& model, const CongestionSpec& spec, Tiebreak tiebreak,
                    const History& history, int horizon) {
    spec.check();
    const int period_now = static_cast<int>(history.size()) + 1;
    if (horizon < period_now)
        throw HorizonTooSmall("detect: horizon " + std::to_string(horizon) +
                              " is below the current period " + std::to_string(period_now));

    DetectReport report;
    report.checked_horizon = horizon;

    std::vector<PublicState> prefixes;
    prefixes.reserve(history.size() + 1);
    PublicState state = initial_state(model, spec);
    prefixes.push_back(state);
    for (Act a : history) {
        state = advance(state, a, model, spec, tiebreak);
        prefixes.push_back(state);
    }

    std::vector<Strategy> strategies;
    strategies.reserve(prefixes.size());
    for (const auto& pref : prefixes)
        strategies.push_back(compute_strategy(pref, model, spec, tiebreak));

    for (const auto& strat : strategies) report.informative.push_back(strat.informative());

    // Realized herd: the latest run of prefixes whose strategy is constant
    // and repeats the previous action, extending through the end.
    std::optional<int> herd_from;
    for (size_t t = history.size() + 1; t-- > 1;) {
        const Strategy& strat = strategies[t];
        if (strat.constant() && strat.action.front() == history[t - 1])
            herd_from = static_cast<int>(t) + 1;
        else
            break;
    }
    report.herd_start = herd_from;

    // Cascade: earliest prefix from which every continuation is certified
    // uninformative. Constancy freezes the public odds, so the certificate at
    // the earliest constant prefix settles all deeper ones with the same odds.
    for (size_t t = 0; t < prefixes.size(); ++t) {
        if (!strategies[t].constant()) continue;
        if (certify_cascade(prefixes[t].public_odds, model, spec, tiebreak,
                            prefixes[t].period)) {
            report.cascade_start = static_cast<int>(t) + 1;
            report.cascade_certified = true;
            break;
        }
    }
    if (!report.cascade_certified) {
        report.uninformative_through_horizon =
            uninformative_subtree(prefixes.back(), model, spec, tiebreak, horizon);
    }
    return report;
}

}  // namespace herdsim
