#pragma once

#include "herdsim/rational.hpp"
#include "herdsim/types.hpp"

#include <map>
#include <variant>

namespace herdsim {

// Differ: a player's payoff falls in the fraction of predecessors who chose
// the same action. Conform: it rises instead, which is equivalent to running
// the same cutoff formula with the cost negated.
enum class CongestionMode { Differ, Conform };

struct AllPredecessors {};
struct Window {
    int m = 1;  // congestion counts only the m immediate predecessors
};
struct Discounted {
    Rat beta;  // geometric weights beta^(i-1-j) on predecessor j, beta in (0,1)
};
using CongestionScope = std::variant<AllPredecessors, Window, Discounted>;

enum class Tiebreak { PreferR, PreferL };

struct CongestionSpec {
    Rat k;  // cost magnitude, in [0,1) so the cutoff log stays finite
    CongestionMode mode = CongestionMode::Differ;
    CongestionScope scope = AllPredecessors{};
    std::map<int, Rat> k_overrides;  // optional per-period cost override

    Rat k_for(int period) const {
        auto it = k_overrides.find(period);
        return it == k_overrides.end() ? k : it->second;
    }
    void check() const;
};

// Fraction of the (scope-weighted) predecessors of `period` who chose R.
// Defined as 1/2 when there are no predecessors, which makes period 1
// congestion-neutral.
Rat congestion_fraction(const History& history, int period, const CongestionScope& scope);

// Exact odds form of the cutoff at which a player switches from L to R:
//   Differ:  exp l_k(f) = (1-k+2fk)/(1+k-2fk)
//   Conform: the reciprocal (k enters with flipped sign).
Rat cutoff_odds(const CongestionSpec& spec, const Rat& f, int period);
OddsLog cutoff_llr(const CongestionSpec& spec, const Rat& f, int period);

// Delta(l, f) = (e^l - 1)/(e^l + 1) + (1-2f)k  (Differ; Conform flips the
// congestion term). Returned as a double; its sign is decided exactly.
double payoff_difference(const OddsLog& belief, const Rat& f, const CongestionSpec& spec,
                         int period);
// -1, 0, +1, decided by exact rational comparison.
int payoff_difference_sign(const Rat& belief_odds, const Rat& f, const CongestionSpec& spec,
                           int period);

Act best_response(const Rat& belief_odds, const Rat& f, const CongestionSpec& spec, int period,
                  Tiebreak tiebreak);

// Realized payoff of player i under history and state:
// 1{a_i = theta} -/+ k * (scope-weighted fraction of predecessors matching a_i).
Rat payoff(const History& history, int period, State theta, const CongestionSpec& spec);

}  // namespace herdsim
