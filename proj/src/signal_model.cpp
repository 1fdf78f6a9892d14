#include "herdsim/signal_model.hpp"

#include <array>
#include <cassert>

namespace herdsim {

std::string signal_name(SignalVariant variant, Signal s) {
    static const std::array<const char*, 4> base{"StrongL", "WeakL", "WeakR", "StrongR"};
    static const std::array<const char*, 6> appx{"StrongL", "MedL", "WeakL",
                                                 "WeakR",   "MedR", "StrongR"};
    if (variant == SignalVariant::Baseline4) return base.at(static_cast<size_t>(s));
    return appx.at(static_cast<size_t>(s));
}

namespace {

void push(std::vector<ConstraintCheck>& out, std::string name, bool ok, bool structural,
          std::string detail) {
    out.push_back({std::move(name), ok, structural, std::move(detail)});
}

}  // namespace

std::vector<ConstraintCheck> SignalModel::validate(const ModelParams& p) {
    std::vector<ConstraintCheck> checks;
    const Rat half(1, 2);

    push(checks, "p0 in [1/2, 1)", p.p0 >= half && p.p0 < 1, true,
         "p0 = " + format_rational(p.p0));

    if (p.variant == SignalVariant::Baseline4) {
        push(checks, "pS in (0, 1)", p.pS > 0 && p.pS < 1, true, "pS = " + format_rational(p.pS));
        const bool q_lo = p.Q > p.pS / 2;
        const bool q_hi = p.Q < p.pS;
        push(checks, "Q > pS/2", q_lo, true,
             "Q = " + format_rational(p.Q) + ", pS/2 = " + format_rational(p.pS / 2));
        push(checks, "Q < pS", q_hi, true,
             "Q = " + format_rational(p.Q) + ", pS = " + format_rational(p.pS));
        if (p.pS > 0 && p.pS < 1 && q_lo && q_hi) {
            const Rat lo = (1 - p.pS) / 2;
            const Rat hi = p.Q * (1 - p.pS) / p.pS;
            push(checks, "q > (1-pS)/2", p.q > lo, true,
                 "q = " + format_rational(p.q) + ", (1-pS)/2 = " + format_rational(lo));
            push(checks, "q < Q(1-pS)/pS", p.q < hi, true,
                 "q = " + format_rational(p.q) + ", Q(1-pS)/pS = " + format_rational(hi));
            // lq > l0; a maintained assumption of the results rather than a
            // structural requirement, so the model is still constructed.
            push(checks, "q > p0(1-pS)  [lq > l0]", p.q > p.p0 * (1 - p.pS), false,
                 "q = " + format_rational(p.q) +
                     ", p0(1-pS) = " + format_rational(p.p0 * (1 - p.pS)));
        }
    } else {
        push(checks, "pS in (0, 1)", p.pS > 0 && p.pS < 1, true, "pS = " + format_rational(p.pS));
        push(checks, "ps in (0, 1)", p.ps > 0 && p.ps < 1, true, "ps = " + format_rational(p.ps));
        push(checks, "pSigma in (0, 1)", p.pSigma > 0 && p.pSigma < 1, true,
             "pSigma = " + format_rational(p.pSigma));
        push(checks, "pS + ps + pSigma = 1", p.pS + p.ps + p.pSigma == 1, true,
             "sum = " + format_rational(p.pS + p.ps + p.pSigma));
        if (p.pS > 0 && p.ps > 0 && p.pSigma > 0) {
            const Rat rEta = p.eta / p.pSigma;
            const Rat rq = p.q / p.ps;
            const Rat rQ = p.Q / p.pS;
            push(checks, "eta/pSigma > 1/2", rEta > half, true,
                 "eta/pSigma = " + format_rational(rEta));
            push(checks, "eta/pSigma < q/ps", rEta < rq, true,
                 "eta/pSigma = " + format_rational(rEta) + ", q/ps = " + format_rational(rq));
            push(checks, "q/ps < Q/pS", rq < rQ, true,
                 "q/ps = " + format_rational(rq) + ", Q/pS = " + format_rational(rQ));
            push(checks, "Q/pS < 1", rQ < 1, true, "Q/pS = " + format_rational(rQ));
            // lEta > l0, checked on demand like lq > l0 in the four signal case.
            const bool eta_inf =
                p.pSigma > p.eta && p.eta / (p.pSigma - p.eta) > p.p0 / (1 - p.p0);
            push(checks, "eta/(pSigma-eta) > p0/(1-p0)  [lEta > l0]", eta_inf, false,
                 "eta = " + format_rational(p.eta));
        }
    }
    return checks;
}

SignalModel SignalModel::build(const ModelParams& p) {
    for (const auto& check : validate(p)) {
        if (check.structural && !check.ok) throw ConstraintViolation(check.name, check.detail);
    }
    return SignalModel(p);
}

Rat SignalModel::signal_prob(Signal s, State theta) const {
    const auto& p = params_;
    // Distributions are mirror symmetric; tabulate for state L and flip.
    const Signal idx = theta == State::L ? s : mirror_signal(s);
    if (p.variant == SignalVariant::Baseline4) {
        switch (idx) {
            case 0: return p.Q;
            case 1: return p.q;
            case 2: return 1 - p.pS - p.q;
            case 3: return p.pS - p.Q;
        }
    } else {
        switch (idx) {
            case 0: return p.Q;
            case 1: return p.q;
            case 2: return p.eta;
            case 3: return p.pSigma - p.eta;
            case 4: return p.ps - p.q;
            case 5: return p.pS - p.Q;
        }
    }
    throw std::out_of_range("signal index out of range");
}

Rat SignalModel::odds_increment(Signal s) const {
    return signal_prob(s, State::R) / signal_prob(s, State::L);
}

LlrConstants LlrConstants::derive(const SignalModel& model) {
    const auto& p = model.params();
    LlrConstants c;
    c.variant = p.variant;
    c.l0 = OddsLog(model.prior_odds());
    c.lQ = OddsLog(p.Q / (p.pS - p.Q));
    if (p.variant == SignalVariant::Baseline4) {
        c.lq = OddsLog(p.q / (1 - p.pS - p.q));
        c.lQq = OddsLog((p.Q + p.q) / (1 - p.Q - p.q));
        c.lNotQ = OddsLog((1 - p.pS + p.Q) / (1 - p.Q));
        assert(c.lq.odds > 1 && c.lq.odds < c.lQq.odds && c.lQq.odds < c.lQ.odds);
        assert(c.lNotQ.odds > 1 && c.lNotQ.odds < c.lQq.odds);
    } else {
        c.lq = OddsLog(p.q / (p.ps - p.q));
        c.lEta = OddsLog(p.eta / (p.pSigma - p.eta));
        c.lQq = OddsLog((p.Q + p.q) / (p.pS + p.ps - p.Q - p.q));
        c.lQqEta = OddsLog((p.Q + p.q + p.eta) / (1 - p.Q - p.q - p.eta));
        c.lNotqQ = OddsLog((p.pSigma + p.q + p.Q) / (1 - p.q - p.Q));
        c.lNotQ = OddsLog((p.ps + p.pSigma + p.Q) / (1 - p.Q));
        assert(c.lEta.odds > 1 && c.lEta.odds < c.lq.odds && c.lq.odds < c.lQq.odds &&
               c.lQq.odds < c.lQ.odds);
        assert(c.lEta.odds < c.lQqEta.odds && c.lQqEta.odds < c.lQ.odds);
        assert(c.lNotQ.odds > 1 && c.lNotQ.odds < c.lNotqQ.odds &&
               c.lNotqQ.odds < c.lQqEta.odds);
    }
    return c;
}

}  // namespace herdsim
