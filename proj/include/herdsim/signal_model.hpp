#pragma once

#include "herdsim/rational.hpp"
#include "herdsim/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace herdsim {

enum class SignalVariant { Baseline4, Appendix6 };

// Signals are indexed in increasing order of their odds increment, so every
// best-response strategy is a threshold in the signal index:
//   Baseline4: 0=StrongL 1=WeakL 2=WeakR 3=StrongR
//   Appendix6: 0=StrongL 1=MedL 2=WeakL 3=WeakR 4=MedR 5=StrongR
using Signal = int;

std::string signal_name(SignalVariant variant, Signal s);

struct ModelParams {
    SignalVariant variant = SignalVariant::Baseline4;
    Rat p0;      // prior probability of state R, in [1/2, 1)
    Rat pS;      // unconditional mass of strong signals
    Rat Q;       // Pr(own-state strong signal | state)
    Rat q;       // Pr(own-state weak (Baseline4) or medium (Appendix6) signal | state)
    Rat ps;      // Appendix6: unconditional mass of medium signals
    Rat pSigma;  // Appendix6: unconditional mass of weak signals
    Rat eta;     // Appendix6: Pr(own-state weak signal | state)
};

struct ConstraintCheck {
    std::string name;
    bool ok = false;
    bool structural = true;  // structural failures reject the model; the
                             // informativeness assumptions (lq>l0, lEta>l0)
                             // are recorded but leave the model usable
    std::string detail;
};

struct ConstraintViolation : std::runtime_error {
    std::string constraint;
    ConstraintViolation(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), constraint(std::move(name)) {}
};

class SignalModel {
  public:
    static std::vector<ConstraintCheck> validate(const ModelParams& p);
    // Throws ConstraintViolation naming the first violated structural constraint.
    static SignalModel build(const ModelParams& p);

    const ModelParams& params() const { return params_; }
    SignalVariant variant() const { return params_.variant; }
    int num_signals() const { return params_.variant == SignalVariant::Baseline4 ? 4 : 6; }

    Rat signal_prob(Signal s, State theta) const;
    // Pr(s|R) / Pr(s|L)
    Rat odds_increment(Signal s) const;
    Signal mirror_signal(Signal s) const { return num_signals() - 1 - s; }

    Rat prior() const { return params_.p0; }
    Rat prior_odds() const { return params_.p0 / (1 - params_.p0); }

  private:
    explicit SignalModel(ModelParams p) : params_(std::move(p)) {}
    ModelParams params_;
};

// The derived log likelihood ratio constants, each kept as an exact odds
// ratio. lQ and lq are the increments of strong and weak private signals,
// lQq / lQqEta the increment of an action that pools every signal favouring
// one state, lNotQ / lNotqQ the increments of actions that pool everything
// except a distinguishable strong (or strong-and-medium) opposing signal.
struct LlrConstants {
    SignalVariant variant = SignalVariant::Baseline4;
    OddsLog l0, lQ, lq, lQq, lNotQ;
    OddsLog lEta, lQqEta, lNotqQ;  // Appendix6 only

    static LlrConstants derive(const SignalModel& model);
};

}  // namespace herdsim
