#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wald {

/// Probability of each success count 0..trials under Binomial(trials, p).
inline std::vector<double> binomial_pmf(int trials, double p) {
  if (trials < 0) throw std::invalid_argument("binomial_pmf: negative trial count");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_pmf: p outside [0,1]");
  const auto n = static_cast<std::size_t>(trials);
  std::vector<double> pmf(n + 1, 0.0);
  if (p == 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  // log C(n, k) accumulated term by term; exact enough for the small
  // designs enumerated here and free of lgamma's global state.
  double log_choose = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) log_choose += std::log(static_cast<double>(n - k + 1)) - std::log(static_cast<double>(k));
    pmf[k] = std::exp(log_choose + static_cast<double>(k) * log_p + static_cast<double>(n - k) * log_q);
  }
  return pmf;
}

}  // namespace wald
