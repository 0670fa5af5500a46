#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace wald {

/// A = surveillance, B = aggressive treatment.
enum class Action { surveillance, aggressive };

constexpr std::string_view to_string(Action a) noexcept {
  return a == Action::surveillance ? "A" : "B";
}

/// Patient welfare of each (care option, illness outcome) pair. The
/// treatment choice depends on welfare only through the threshold p#, so
/// every model is carried alongside its normalized neutralizing equivalent
/// U_A0 = 1, U_A1 = 0, U_B = 1 - p#. Regrets are reported in those
/// normalized units; multiply by scale() for the original units.
class WelfareModel {
 public:
  WelfareModel(double surveil_well, double surveil_ill, double treat_well, double treat_ill)
      : ua0_(surveil_well), ua1_(surveil_ill), ub0_(treat_well), ub1_(treat_ill) {
    if (!(ub1_ > ua1_)) throw std::invalid_argument("welfare: treatment must beat surveillance when ill");
    if (!(ua0_ > ub0_)) throw std::invalid_argument("welfare: surveillance must beat treatment when well");
    const double a = ua0_ - ub0_;
    const double b = ub1_ - ua1_;
    scale_ = a + b;
    threshold_ = a / scale_;
    normalized_ub_ = (ua0_ == 1.0 && ua1_ == 0.0 && ub0_ == ub1_) ? ub0_ : 1.0 - threshold_;
  }

  /// Treatment neutralizes the illness: U_B0 = U_B1 = treat.
  static WelfareModel neutralizing(double surveil_well, double surveil_ill, double treat) {
    return {surveil_well, surveil_ill, treat, treat};
  }

  /// U_A0 = 1, U_A1 = 0 and 0 < U_B < 1.
  static WelfareModel normalized(double treat) {
    if (!(treat > 0.0 && treat < 1.0)) throw std::invalid_argument("welfare: normalized U_B must lie in (0,1)");
    return neutralizing(1.0, 0.0, treat);
  }

  double surveil_well() const noexcept { return ua0_; }
  double surveil_ill() const noexcept { return ua1_; }
  double treat_well() const noexcept { return ub0_; }
  double treat_ill() const noexcept { return ub1_; }

  double threshold() const noexcept { return threshold_; }
  double normalized_treat() const noexcept { return normalized_ub_; }
  double scale() const noexcept { return scale_; }

 private:
  double ua0_, ua1_, ub0_, ub1_;
  double scale_ = 1.0;
  double threshold_ = 0.5;
  double normalized_ub_ = 0.5;
};

/// p# = [U_A0 - U_B0] / ([U_A0 - U_B0] + [U_B1 - U_A1]).
inline double threshold(const WelfareModel& welfare) noexcept { return welfare.threshold(); }

/// As-if optimization: surveillance iff estimate <= p#. Equality goes to A.
inline Action choose_treatment(double estimate, const WelfareModel& welfare) {
  if (!(estimate >= 0.0 && estimate <= 1.0)) throw std::invalid_argument("choose_treatment: estimate outside [0,1]");
  return estimate <= welfare.threshold() ? Action::surveillance : Action::aggressive;
}

/// Optimal action when the illness probability is known (ties to A).
inline Action optimal_action(double p_ill, const WelfareModel& welfare) noexcept {
  return 1.0 - p_ill >= welfare.normalized_treat() ? Action::surveillance : Action::aggressive;
}

/// |(1 - p) - U_B|: welfare lost by picking the wrong action in this state.
inline double regret_gap(double p_ill, const WelfareModel& welfare) noexcept {
  return std::fabs((1.0 - p_ill) - welfare.normalized_treat());
}

inline double state_regret(Action action, double p_ill, const WelfareModel& welfare) {
  if (!(p_ill >= 0.0 && p_ill <= 1.0)) throw std::invalid_argument("state_regret: p outside [0,1]");
  return action == optimal_action(p_ill, welfare) ? 0.0 : regret_gap(p_ill, welfare);
}

/// Square-loss regret of a binary point predictor that outputs 1 with
/// probability q when P(y = 1) = p.
inline double mse_regret(double q, double p) {
  if (!(q >= 0.0 && q <= 1.0 && p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mse_regret: q, p outside [0,1]");
  return q * (1.0 - p) + p * (1.0 - q) - p * (1.0 - p);
}

/// Misclassification-rate regret of the same predictor.
inline double mcr_regret(double q, double p) {
  if (!(q >= 0.0 && q <= 1.0 && p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mcr_regret: q, p outside [0,1]");
  return q * (1.0 - p) + p * (1.0 - q) - std::min(p, 1.0 - p);
}

/// Square-loss regret of any predictor: variance plus squared bias.
inline double square_loss_regret(double predictor_variance, double predictor_mean, double outcome_mean) noexcept {
  const double bias = outcome_mean - predictor_mean;
  return predictor_variance + bias * bias;
}

}  // namespace wald
