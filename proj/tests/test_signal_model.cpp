#include "test_util.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>

using namespace herdsim;
using herdsim::testutil::random_appendix;
using herdsim::testutil::random_baseline;

namespace {

ModelParams example1a_params() { return bundled_config("example1a").model; }

// Independent high-precision log of an exact rational.
double precise_log(const Rat& r) {
    using Big = boost::multiprecision::cpp_bin_float_50;
    const Big num(boost::multiprecision::numerator(r).str());
    const Big den(boost::multiprecision::denominator(r).str());
    return static_cast<double>(boost::multiprecision::log(num / den));
}

}  // namespace

TEST_SUITE_BEGIN("signal_model");

TEST_CASE("accepts the first bundled four-signal parameter set") {
    const SignalModel m = SignalModel::build(example1a_params());
    CHECK(m.num_signals() == 4);
    CHECK(m.prior_odds() == Rat(1));
    for (const auto& c : SignalModel::validate(m.params())) CHECK(c.ok);
}

TEST_CASE("rejects Q at the open upper boundary Q = pS") {
    ModelParams p = example1a_params();
    p.Q = p.pS;
    CHECK_THROWS_WITH_AS(static_cast<void>(SignalModel::build(p)),
                         doctest::Contains("Q < pS"), ConstraintViolation);
    try {
        SignalModel::build(p);
    } catch (const ConstraintViolation& e) {
        CHECK(e.constraint == "Q < pS");
    }
}

TEST_CASE("rejects a six-signal weak signal at exactly half its mass") {
    ModelParams p = bundled_config("appendix").model;
    p.eta = p.pSigma / 2;  // eta/pSigma = 1/2 violates the strict chain
    CHECK_THROWS_AS(static_cast<void>(SignalModel::build(p)), ConstraintViolation);
    p.eta = p.pSigma * Rat(2501, 5000);  // 0.5002 is back inside
    CHECK_NOTHROW(static_cast<void>(SignalModel::build(p)));
}

TEST_CASE("derived constants of the bundled set match their defining quotients") {
    const SignalModel m = SignalModel::build(example1a_params());
    const LlrConstants c = LlrConstants::derive(m);
    CHECK(c.l0.odds == Rat(1));
    CHECK(c.l0.llr == 0.0);
    CHECK(c.lQ.odds == Rat(15611, 5));
    CHECK(c.lq.odds == Rat(3));
    CHECK(c.lQq.odds == Rat(16187, 197));
    CHECK(c.lNotQ.odds == Rat(16379, 773));
    // against an independent 50-digit evaluation
    CHECK(std::fabs(c.lQq.llr - precise_log(Rat(16187, 197))) < 1e-12);
    CHECK(std::fabs(c.lQq.llr - 4.409) < 5e-4);
    CHECK(std::fabs(c.lQ.llr - precise_log(Rat(15611, 5))) < 1e-12);
}

TEST_CASE("strong signal carries vanishing information at the symmetric limit") {
    ModelParams p;
    p.variant = SignalVariant::Baseline4;
    p.p0 = Rat(1, 2);
    p.pS = Rat(1, 2);
    p.Q = Rat(1, 4) + Rat(1, 1000000);
    p.q = Rat(1, 4) + Rat(1, 2000000);
    const LlrConstants c = LlrConstants::derive(SignalModel::build(p));
    CHECK(c.lQ.odds > 1);
    CHECK(c.lQ.llr < 2e-5);
}

TEST_CASE("four-signal distribution given state L") {
    const SignalModel m = SignalModel::build(example1a_params());
    const auto& p = m.params();
    CHECK(m.signal_prob(0, State::L) == p.Q);
    CHECK(m.signal_prob(1, State::L) == p.q);
    CHECK(m.signal_prob(2, State::L) == 1 - p.pS - p.q);
    CHECK(m.signal_prob(3, State::L) == p.pS - p.Q);
}

TEST_CASE("six-signal distribution given state R") {
    const SignalModel m = SignalModel::build(bundled_config("appendix").model);
    const auto& p = m.params();
    CHECK(m.signal_prob(5, State::R) == p.Q);           // StrongR
    CHECK(m.signal_prob(4, State::R) == p.q);           // MedR
    CHECK(m.signal_prob(3, State::R) == p.eta);         // WeakR
    CHECK(m.signal_prob(2, State::R) == p.pSigma - p.eta);
    CHECK(m.signal_prob(1, State::R) == p.ps - p.q);
    CHECK(m.signal_prob(0, State::R) == p.pS - p.Q);
}

TEST_CASE("distributions normalize and mirror across random models") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const ModelParams params = trial % 2 == 0 ? random_baseline(rng) : random_appendix(rng);
        const SignalModel m = SignalModel::build(params);
        Rat sum_l = 0, sum_r = 0;
        for (Signal s = 0; s < m.num_signals(); ++s) {
            const Rat pl = m.signal_prob(s, State::L);
            const Rat pr = m.signal_prob(s, State::R);
            CHECK(pl > 0);
            CHECK(pl < 1);
            sum_l += pl;
            sum_r += pr;
            CHECK(pl == m.signal_prob(m.mirror_signal(s), State::R));
        }
        CHECK(sum_l == 1);
        CHECK(sum_r == 1);
        if (m.variant() == SignalVariant::Appendix6) {
            CHECK(m.signal_prob(0, State::L) + m.signal_prob(5, State::L) == params.pS);
            CHECK(m.signal_prob(1, State::L) + m.signal_prob(4, State::L) == params.ps);
            CHECK(m.signal_prob(2, State::L) + m.signal_prob(3, State::L) == params.pSigma);
        }
    }
}

TEST_CASE("ordering relations hold for every valid model") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const bool base = trial % 2 == 0;
        const SignalModel m =
            SignalModel::build(base ? random_baseline(rng) : random_appendix(rng));
        const LlrConstants c = LlrConstants::derive(m);
        if (base) {
            CHECK(Rat(1) < c.lq.odds);
            CHECK(c.lq.odds < c.lQq.odds);
            CHECK(c.lQq.odds < c.lQ.odds);
            CHECK(Rat(1) < c.lNotQ.odds);
            CHECK(c.lNotQ.odds < c.lQq.odds);
        } else {
            CHECK(Rat(1) < c.lEta.odds);
            CHECK(c.lEta.odds < c.lq.odds);
            CHECK(c.lq.odds < c.lQq.odds);
            CHECK(c.lQq.odds < c.lQ.odds);
            CHECK(c.lEta.odds < c.lQqEta.odds);
            CHECK(c.lQqEta.odds < c.lQ.odds);
            CHECK(Rat(1) < c.lNotQ.odds);
            CHECK(c.lNotQ.odds < c.lNotqQ.odds);
            CHECK(c.lNotqQ.odds < c.lQqEta.odds);
        }
    }
}

TEST_CASE("exp of each stored llr reproduces the stored odds") {
    std::mt19937_64 rng(99);
    auto check_pair = [](const OddsLog& o) {
        const double back = std::exp(o.llr);
        const double odds = to_double(o.odds);
        CHECK(std::fabs(back - odds) <= 1e-12 * std::max(1.0, std::fabs(odds)));
    };
    for (int trial = 0; trial < 40; ++trial) {
        const bool base = trial % 2 == 0;
        const SignalModel m =
            SignalModel::build(base ? random_baseline(rng) : random_appendix(rng));
        const LlrConstants c = LlrConstants::derive(m);
        check_pair(c.l0);
        check_pair(c.lQ);
        check_pair(c.lq);
        check_pair(c.lQq);
        check_pair(c.lNotQ);
        if (!base) {
            check_pair(c.lEta);
            check_pair(c.lQqEta);
            check_pair(c.lNotqQ);
        }
    }
}

TEST_CASE("weak-signal informativeness is an assumption, not a build failure") {
    ModelParams p = bundled_config("example1b").model;
    p.q = Rat(55, 2048);  // below p0(1-pS) = 15/512 but structurally valid
    CHECK_NOTHROW(static_cast<void>(SignalModel::build(p)));
    bool found = false;
    for (const auto& c : SignalModel::validate(p)) {
        if (!c.structural) {
            found = true;
            CHECK_FALSE(c.ok);
        } else {
            CHECK(c.ok);
        }
    }
    CHECK(found);
}

TEST_SUITE_END();
