#include "herdsim/decision.hpp"

#include <algorithm>
#include <stdexcept>

namespace herdsim {

void CongestionSpec::check() const {
    auto check_k = [](const Rat& kk) {
        if (kk < 0 || kk >= 1)
            throw std::invalid_argument("congestion cost k must lie in [0,1), got " +
                                        format_rational(kk));
    };
    check_k(k);
    for (const auto& [period, kk] : k_overrides) {
        if (period < 1) throw std::invalid_argument("k override period must be >= 1");
        check_k(kk);
    }
    if (const auto* w = std::get_if<Window>(&scope)) {
        if (w->m < 1) throw std::invalid_argument("window size m must be >= 1");
    } else if (const auto* d = std::get_if<Discounted>(&scope)) {
        if (d->beta <= 0 || d->beta >= 1)
            throw std::invalid_argument("discount beta must lie in (0,1), got " +
                                        format_rational(d->beta));
    }
}

Rat congestion_fraction(const History& history, int period, const CongestionScope& scope) {
    const int n = std::min<int>(period - 1, static_cast<int>(history.size()));
    if (n <= 0) return Rat(1, 2);

    if (std::holds_alternative<AllPredecessors>(scope)) {
        int count = 0;
        for (int j = 0; j < n; ++j)
            if (history[static_cast<size_t>(j)] == Act::R) ++count;
        return Rat(count, n);
    }
    if (const auto* w = std::get_if<Window>(&scope)) {
        const int span = std::min(w->m, n);
        int count = 0;
        for (int j = n - span; j < n; ++j)
            if (history[static_cast<size_t>(j)] == Act::R) ++count;
        return Rat(count, span);
    }
    const auto& d = std::get<Discounted>(scope);
    // weight beta^(n-1-j) on predecessor j (0-based), most recent weight 1
    Rat weight = 1, num = 0, den = 0;
    for (int j = n - 1; j >= 0; --j) {
        den += weight;
        if (history[static_cast<size_t>(j)] == Act::R) num += weight;
        weight *= d.beta;
    }
    return num / den;
}

Rat cutoff_odds(const CongestionSpec& spec, const Rat& f, int period) {
    if (f < 0 || f > 1) throw std::domain_error("congestion fraction outside [0,1]");
    const Rat k = spec.k_for(period);
    const Rat num = 1 - k + 2 * f * k;
    const Rat den = 1 + k - 2 * f * k;
    if (num <= 0 || den <= 0)
        throw std::domain_error("cutoff undefined: 1 +/- k(1-2f) not positive");
    return spec.mode == CongestionMode::Differ ? num / den : den / num;
}

OddsLog cutoff_llr(const CongestionSpec& spec, const Rat& f, int period) {
    return OddsLog(cutoff_odds(spec, f, period));
}

int payoff_difference_sign(const Rat& belief_odds, const Rat& f, const CongestionSpec& spec,
                           int period) {
    const Rat cut = cutoff_odds(spec, f, period);
    if (belief_odds > cut) return 1;
    if (belief_odds < cut) return -1;
    return 0;
}

double payoff_difference(const OddsLog& belief, const Rat& f, const CongestionSpec& spec,
                         int period) {
    const double e = to_double(belief.odds);
    const double k = to_double(spec.k_for(period));
    const double fd = to_double(f);
    const double congestion = spec.mode == CongestionMode::Differ ? (1 - 2 * fd) * k
                                                                  : (2 * fd - 1) * k;
    return (e - 1) / (1 + e) + congestion;
}

Act best_response(const Rat& belief_odds, const Rat& f, const CongestionSpec& spec, int period,
                  Tiebreak tiebreak) {
    const int sign = payoff_difference_sign(belief_odds, f, spec, period);
    if (sign > 0) return Act::R;
    if (sign < 0) return Act::L;
    return tiebreak == Tiebreak::PreferR ? Act::R : Act::L;
}

Rat payoff(const History& history, int period, State theta, const CongestionSpec& spec) {
    if (period < 1 || static_cast<size_t>(period) > history.size())
        throw std::invalid_argument("payoff: history shorter than period");
    const Act own = history[static_cast<size_t>(period - 1)];
    const Rat base = own == act_of(theta) ? 1 : 0;
    if (period == 1) return base;  // no predecessors, no congestion term

    const Rat fR = congestion_fraction(history, period, spec.scope);
    const Rat match = own == Act::R ? fR : 1 - fR;
    const Rat k = spec.k_for(period);
    if (spec.mode == CongestionMode::Differ) return base - k * match;
    return base + k * match;
}

}  // namespace herdsim
