#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wald {

/// Outcomes normalized to [0, 1]; `observed_share` is P(observable) and
/// `observed_count` the number K of observed outcomes, treated as fixed.
struct MissingDataSetting {
  double observed_share = 1.0;
  std::optional<int> observed_count;

  double missing_share() const noexcept { return 1.0 - observed_share; }

  void validate() const {
    if (!(observed_share >= 0.0 && observed_share <= 1.0))
      throw std::invalid_argument("missing-data setting: observed share outside [0,1]");
    if (observed_share > 0.0 && (!observed_count || *observed_count < 1))
      throw std::invalid_argument("missing-data setting: need K >= 1 observed outcomes when the observed share is positive");
  }
};

/// Sample analog of the identification-interval midpoint:
/// mean * P(observed) + 1/2 * P(missing).
inline double midpoint_estimate(double observed_mean, const MissingDataSetting& setting) {
  if (!(setting.observed_share >= 0.0 && setting.observed_share <= 1.0))
    throw std::invalid_argument("midpoint_estimate: observed share outside [0,1]");
  if (setting.observed_share == 0.0) return 0.5;
  if (!(observed_mean >= 0.0 && observed_mean <= 1.0))
    throw std::invalid_argument("midpoint_estimate: observed mean outside [0,1]");
  return observed_mean * setting.observed_share + 0.5 * setting.missing_share();
}

/// Worst-case square-loss regret of the midpoint predictor:
/// 1/4 [P(observed)^2 / K + P(missing)^2].
inline double midpoint_max_regret(const MissingDataSetting& setting) {
  setting.validate();
  const double p1 = setting.observed_share;
  const double p0 = setting.missing_share();
  const double sampling = p1 > 0.0 ? p1 * p1 / static_cast<double>(*setting.observed_count) : 0.0;
  return 0.25 * (sampling + p0 * p0);
}

struct CounterfactualPrediction {
  double if_all_a = 0.5;
  double if_all_b = 0.5;
};

/// Midpoint predictions of the mean outcome were everyone to receive A (or
/// everyone B). A mean may be absent only when its group is empty.
inline CounterfactualPrediction counterfactual_midpoints(std::optional<double> mean_a, double share_a,
                                                         std::optional<double> mean_b) {
  if (!(share_a >= 0.0 && share_a <= 1.0)) throw std::invalid_argument("counterfactual_midpoints: share outside [0,1]");
  const double share_b = 1.0 - share_a;
  const auto check = [](std::optional<double> mean, double share, const char* which) {
    if (share > 0.0 && !mean)
      throw std::invalid_argument(std::string("counterfactual_midpoints: missing mean for treatment ") + which);
    if (mean && !(*mean >= 0.0 && *mean <= 1.0))
      throw std::invalid_argument(std::string("counterfactual_midpoints: mean outside [0,1] for treatment ") + which);
  };
  check(mean_a, share_a, "A");
  check(mean_b, share_b, "B");
  return {mean_a.value_or(0.0) * share_a + 0.5 * share_b, mean_b.value_or(0.0) * share_b + 0.5 * share_a};
}

struct DesignRegret {
  MissingDataSetting setting;
  double max_regret = 0.0;
};

/// Candidate designs ranked by midpoint max regret, best first. Ties go to
/// the larger K, then keep input order.
inline std::vector<DesignRegret> design_max_regret_table(const std::vector<MissingDataSetting>& designs) {
  std::vector<DesignRegret> table;
  table.reserve(designs.size());
  for (const auto& d : designs) table.push_back({d, midpoint_max_regret(d)});
  std::stable_sort(table.begin(), table.end(), [](const DesignRegret& a, const DesignRegret& b) {
    if (a.max_regret != b.max_regret) return a.max_regret < b.max_regret;
    return a.setting.observed_count.value_or(0) > b.setting.observed_count.value_or(0);
  });
  return table;
}

}  // namespace wald
