#pragma once

// Shared helpers for the unit and acceptance suites: bundled parameter sets
// and random generation of structurally valid models.

#include "herdsim/analysis.hpp"
#include "herdsim/config.hpp"

#include <functional>
#include <random>

namespace herdsim::testutil {

inline Rat rat_between(std::mt19937_64& rng, const Rat& lo, const Rat& hi, int grid = 128) {
    std::uniform_int_distribution<int> d(1, grid - 1);
    return lo + (hi - lo) * Rat(d(rng), grid);
}

inline ModelParams random_baseline(std::mt19937_64& rng) {
    for (;;) {
        ModelParams p;
        p.variant = SignalVariant::Baseline4;
        std::uniform_int_distribution<int> ps_num(4, 60);
        p.pS = Rat(ps_num(rng), 64);
        p.Q = rat_between(rng, p.pS / 2, p.pS);
        p.q = rat_between(rng, (1 - p.pS) / 2, p.Q * (1 - p.pS) / p.pS);
        // p0 below q/(1-pS) keeps the weak signal informative (lq > l0)
        Rat p0_hi = p.q / (1 - p.pS);
        if (p0_hi > 1) p0_hi = 1;
        std::uniform_int_distribution<int> coin(0, 1);
        p.p0 = coin(rng) == 0 ? Rat(1, 2) : rat_between(rng, Rat(1, 2), p0_hi);
        bool ok = true;
        for (const auto& c : SignalModel::validate(p)) ok = ok && c.ok;
        if (ok) return p;
    }
}

inline ModelParams random_appendix(std::mt19937_64& rng) {
    for (;;) {
        ModelParams p;
        p.variant = SignalVariant::Appendix6;
        std::uniform_int_distribution<int> ps_num(8, 16);
        p.pS = Rat(ps_num(rng), 20);
        const Rat rest = 1 - p.pS;
        p.ps = rest * rat_between(rng, Rat(1, 4), Rat(3, 4));
        p.pSigma = rest - p.ps;
        const Rat rQ = rat_between(rng, Rat(1, 2), Rat(1));
        const Rat rq = rat_between(rng, Rat(1, 2), rQ);
        const Rat rEta = rat_between(rng, Rat(1, 2), rq);
        p.Q = rQ * p.pS;
        p.q = rq * p.ps;
        p.eta = rEta * p.pSigma;
        std::uniform_int_distribution<int> coin(0, 1);
        p.p0 = coin(rng) == 0 ? Rat(1, 2) : rat_between(rng, Rat(1, 2), Rat(3, 4));
        bool structural = true;
        for (const auto& c : SignalModel::validate(p))
            if (c.structural) structural = structural && c.ok;
        if (structural) return p;
    }
}

inline CongestionSpec random_spec(std::mt19937_64& rng) {
    CongestionSpec spec;
    std::uniform_int_distribution<int> k_num(0, 100);
    spec.k = Rat(k_num(rng), 128);
    std::uniform_int_distribution<int> mode(0, 1);
    spec.mode = mode(rng) == 0 ? CongestionMode::Differ : CongestionMode::Conform;
    std::uniform_int_distribution<int> scope(0, 2);
    switch (scope(rng)) {
        case 0: spec.scope = AllPredecessors{}; break;
        case 1: {
            std::uniform_int_distribution<int> m(1, 4);
            spec.scope = Window{m(rng)};
            break;
        }
        default: spec.scope = Discounted{rat_between(rng, Rat(1, 10), Rat(9, 10))};
    }
    return spec;
}

// Visits every action-history node up to the given depth.
inline void walk_reachable(const SignalModel& model, const CongestionSpec& spec,
                           Tiebreak tiebreak, int depth,
                           const std::function<void(const PublicState&, const Strategy&)>& fn) {
    std::function<void(const PublicState&, int)> rec = [&](const PublicState& state, int left) {
        const Strategy strat = compute_strategy(state, model, spec, tiebreak);
        fn(state, strat);
        if (left == 0) return;
        for (Act a : {Act::L, Act::R})
            rec(advance(state, a, model, spec, tiebreak), left - 1);
    };
    rec(initial_state(model, spec), depth);
}

inline bool strategy_has_tie(const PublicState& state, const SignalModel& model,
                             const CongestionSpec& spec) {
    const Rat cut = cutoff_odds(spec, state.f, state.period);
    for (Signal s = 0; s < model.num_signals(); ++s)
        if (state.public_odds * model.odds_increment(s) == cut) return true;
    return false;
}

}  // namespace herdsim::testutil
