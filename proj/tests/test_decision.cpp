#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace herdsim;

namespace {

CongestionSpec differ(Rat k) {
    CongestionSpec s;
    s.k = std::move(k);
    return s;
}

CongestionSpec conform(Rat k) {
    CongestionSpec s;
    s.k = std::move(k);
    s.mode = CongestionMode::Conform;
    return s;
}

}  // namespace

TEST_SUITE_BEGIN("decision");

TEST_CASE("congestion fraction per scope") {
    const History h = parse_history("RLR");
    CHECK(congestion_fraction({}, 1, AllPredecessors{}) == Rat(1, 2));
    CHECK(congestion_fraction(h, 4, AllPredecessors{}) == Rat(2, 3));
    CHECK(congestion_fraction(h, 3, AllPredecessors{}) == Rat(1, 2));
    CHECK(congestion_fraction(h, 4, Window{2}) == Rat(1, 2));
    CHECK(congestion_fraction(h, 4, Window{1}) == Rat(1));
    CHECK(congestion_fraction(h, 4, Window{5}) == Rat(2, 3));
    // weights 81/100, 9/10, 1 on R, L, R
    CHECK(congestion_fraction(h, 4, Discounted{Rat(9, 10)}) == Rat(181, 271));
}

TEST_CASE("cutoff values") {
    CHECK(cutoff_odds(differ(Rat(1, 3)), Rat(1, 2), 2) == Rat(1));
    CHECK(cutoff_odds(differ(Rat(0)), Rat(1), 2) == Rat(1));
    // hand evaluation: ln(4/3) - ln(2/3) = ln 2
    const OddsLog at_one = cutoff_llr(differ(Rat(1, 3)), Rat(1), 2);
    CHECK(at_one.odds == Rat(2));
    CHECK(std::fabs(at_one.llr - std::log(2.0)) < 1e-15);
    CHECK(cutoff_odds(conform(Rat(1, 3)), Rat(1), 2) == Rat(1, 2));
    CHECK(cutoff_odds(conform(Rat(1, 3)), Rat(0), 2) == Rat(2));
}

TEST_CASE("cutoff antisymmetry, exact on random draws") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> k_num(0, 990);
    std::uniform_int_distribution<int> f_num(0, 1000);
    for (int i = 0; i < 10000; ++i) {
        const Rat k(k_num(rng), 1000);
        const Rat f(f_num(rng), 1000);
        const CongestionSpec spec = i % 2 == 0 ? differ(k) : conform(k);
        CHECK(cutoff_odds(spec, f, 2) * cutoff_odds(spec, 1 - f, 2) == Rat(1));
    }
}

TEST_CASE("cutoff is strictly monotone in the congestion fraction") {
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> k_num(1, 120);
    std::uniform_int_distribution<int> f_num(0, 127);
    for (int i = 0; i < 2000; ++i) {
        const Rat k(k_num(rng), 128);
        Rat f1(f_num(rng), 128), f2(f_num(rng), 128);
        if (f1 == f2) continue;
        if (f1 > f2) std::swap(f1, f2);
        CHECK(cutoff_odds(differ(k), f1, 2) < cutoff_odds(differ(k), f2, 2));
        CHECK(cutoff_odds(conform(k), f1, 2) > cutoff_odds(conform(k), f2, 2));
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(differ(Rat(1)).check(), std::invalid_argument);
    CHECK_THROWS_AS(differ(Rat(-1, 10)).check(), std::invalid_argument);
    CongestionSpec w = differ(Rat(1, 4));
    w.scope = Window{0};
    CHECK_THROWS_AS(w.check(), std::invalid_argument);
    CongestionSpec d = differ(Rat(1, 4));
    d.scope = Discounted{Rat(1)};
    CHECK_THROWS_AS(d.check(), std::invalid_argument);
    CHECK_NOTHROW(differ(Rat(0)).check());
}

TEST_CASE("payoff difference signs") {
    const OddsLog even{Rat(1)};
    CHECK(payoff_difference(even, Rat(1, 2), differ(Rat(1, 4)), 2) == doctest::Approx(0.0));
    CHECK(payoff_difference_sign(Rat(1), Rat(1, 2), differ(Rat(1, 4)), 2) == 0);
    // neutral belief, everyone before chose R: differ makes L strictly better
    CHECK(payoff_difference(even, Rat(1), differ(Rat(1, 4)), 2) == doctest::Approx(-0.25));
    CHECK(payoff_difference_sign(Rat(1), Rat(1), differ(Rat(1, 4)), 2) == -1);
    CHECK(best_response(Rat(1), Rat(1), differ(Rat(1, 4)), 2, Tiebreak::PreferR) == Act::L);
    // strong belief dominates a small congestion cost
    const OddsLog strong{Rat(1000)};
    CHECK(payoff_difference(strong, Rat(1), differ(Rat(1, 20)), 2) > 0);
    CHECK(best_response(Rat(1000), Rat(1), differ(Rat(1, 20)), 2, Tiebreak::PreferL) == Act::R);
}

TEST_CASE("tie goes to the configured side") {
    // belief odds exactly at the cutoff odds 2
    const CongestionSpec spec = differ(Rat(1, 3));
    CHECK(payoff_difference_sign(Rat(2), Rat(1), spec, 2) == 0);
    CHECK(best_response(Rat(2), Rat(1), spec, 2, Tiebreak::PreferR) == Act::R);
    CHECK(best_response(Rat(2), Rat(1), spec, 2, Tiebreak::PreferL) == Act::L);
}

TEST_CASE("best response agrees with the cutoff comparison on random inputs") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> num(1, 400);
    std::uniform_int_distribution<int> den(1, 400);
    std::uniform_int_distribution<int> k_num(0, 120);
    std::uniform_int_distribution<int> f_num(0, 128);
    for (int i = 0; i < 10000; ++i) {
        const Rat belief(num(rng), den(rng));
        const Rat f(f_num(rng), 128);
        CongestionSpec spec = i % 2 == 0 ? differ(Rat(k_num(rng), 128))
                                         : conform(Rat(k_num(rng), 128));
        const Rat cut = cutoff_odds(spec, f, 3);
        const Act via_delta = best_response(belief, f, spec, 3, Tiebreak::PreferR);
        const Act via_cutoff = belief > cut || belief == cut ? Act::R : Act::L;
        CHECK(via_delta == via_cutoff);
    }
}

TEST_CASE("k = 0 reduces the best response to the sign of the belief") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> num(1, 50);
    std::uniform_int_distribution<int> f_num(0, 16);
    for (int i = 0; i < 500; ++i) {
        const Rat belief(num(rng), num(rng));
        const Rat f(f_num(rng), 16);
        for (const CongestionSpec& spec :
             {differ(Rat(0)), conform(Rat(0)),
              [] {
                  CongestionSpec s;
                  s.k = 0;
                  s.scope = Window{2};
                  return s;
              }()}) {
            const Act a = best_response(belief, f, spec, 4, Tiebreak::PreferR);
            if (belief > 1) CHECK(a == Act::R);
            if (belief < 1) CHECK(a == Act::L);
        }
    }
}

TEST_CASE("realized payoffs") {
    const CongestionSpec spec = differ(Rat(1, 5));
    CHECK(payoff(parse_history("R"), 1, State::R, spec) == Rat(1));
    CHECK(payoff(parse_history("L"), 1, State::R, spec) == Rat(0));
    CHECK(payoff(parse_history("RRR"), 3, State::R, spec) == 1 - Rat(1, 5));
    CHECK(payoff(parse_history("RLR"), 3, State::L, spec) == -Rat(1, 10));
    CHECK(payoff(parse_history("RLR"), 3, State::L, conform(Rat(1, 5))) == Rat(1, 10));
    CHECK_THROWS_AS(payoff(parse_history("R"), 2, State::R, spec), std::invalid_argument);
}

TEST_CASE("per-period cost overrides feed the cutoff and payoff") {
    CongestionSpec spec = differ(Rat(1, 3));
    spec.k_overrides[4] = Rat(0);
    CHECK(cutoff_odds(spec, Rat(1), 2) == Rat(2));
    CHECK(cutoff_odds(spec, Rat(1), 4) == Rat(1));
    CHECK(payoff(parse_history("RRRR"), 4, State::R, spec) == Rat(1));
}

TEST_SUITE_END();
