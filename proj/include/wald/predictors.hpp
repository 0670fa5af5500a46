#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wald {

/// Predetermined sample size per covariate cell.
class SampleDesign {
 public:
  explicit SampleDesign(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw std::invalid_argument("sample design: no cells");
    bool any = false;
    for (int n : sizes_) {
      if (n < 0) throw std::invalid_argument("sample design: negative cell size");
      any = any || n > 0;
    }
    if (!any) throw std::invalid_argument("sample design: every cell is empty");
  }

  std::size_t cells() const noexcept { return sizes_.size(); }
  int operator[](std::size_t k) const { return sizes_.at(k); }
  const std::vector<int>& sizes() const noexcept { return sizes_; }
  int total() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }

  friend bool operator==(const SampleDesign&, const SampleDesign&) = default;

 private:
  std::vector<int> sizes_;
};

/// Observed success count per cell; one realization of the sample data.
class OutcomeCounts {
 public:
  explicit OutcomeCounts(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int n : counts_)
      if (n < 0) throw std::invalid_argument("outcome counts: negative count");
  }
  OutcomeCounts(std::vector<int> counts, const SampleDesign& design) : OutcomeCounts(std::move(counts)) {
    check_against(design);
  }

  std::size_t cells() const noexcept { return counts_.size(); }
  int operator[](std::size_t k) const { return counts_.at(k); }
  const std::vector<int>& counts() const noexcept { return counts_; }

  void check_against(const SampleDesign& design) const {
    if (cells() != design.cells()) throw std::invalid_argument("outcome counts: cell count differs from design");
    for (std::size_t k = 0; k < cells(); ++k)
      if (counts_[k] > design[k])
        throw std::invalid_argument("outcome counts: cell " + std::to_string(k) + " exceeds its sample size");
  }

 private:
  std::vector<int> counts_;
};

/// Nonnegative per-cell weights, normalized to sum to one on construction.
class KernelWeights {
 public:
  explicit KernelWeights(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw std::invalid_argument("kernel weights: no cells");
    double sum = 0.0;
    for (double w : w_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("kernel weights: weights must be finite and >= 0");
      sum += w;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("kernel weights: weights sum to zero");
    if (sum != 1.0)
      for (double& w : w_) w /= sum;
  }

  /// Binary-covariate form (w0, 1 - w0). For w0 in [0.5, 1] the complement is
  /// exact, so no renormalization rounding is introduced.
  static KernelWeights binary(double w0) {
    if (!(w0 >= 0.0 && w0 <= 1.0)) throw std::invalid_argument("kernel weights: w0 outside [0,1]");
    return KernelWeights({w0, 1.0 - w0});
  }

  std::size_t cells() const noexcept { return w_.size(); }
  double operator[](std::size_t k) const { return w_.at(k); }
  const std::vector<double>& values() const noexcept { return w_; }

  friend bool operator==(const KernelWeights&, const KernelWeights&) = default;

 private:
  std::vector<double> w_;
};

/// sum_k w_k n_k / sum_k w_k N_k over raw spans. The sums run in cell order;
/// the regret engine relies on this exact operation sequence.
inline double weighted_average_estimate(std::span<const int> counts, std::span<const int> sizes,
                                        std::span<const double> weights) {
  if (counts.size() != sizes.size() || counts.size() != weights.size())
    throw std::invalid_argument("weighted_average_estimate: cell counts differ");
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    numerator += weights[k] * counts[k];
    denominator += weights[k] * sizes[k];
  }
  if (!(denominator > 0.0))
    throw std::domain_error("weighted_average_estimate: every positive-weight cell is empty");
  return numerator / denominator;
}

inline double weighted_average_estimate(const OutcomeCounts& counts, const SampleDesign& design,
                                        const KernelWeights& weights) {
  counts.check_against(design);
  if (weights.cells() != design.cells())
    throw std::invalid_argument("weighted_average_estimate: weights and design differ in cell count");
  return weighted_average_estimate(counts.counts(), design.sizes(), weights.values());
}

inline double sample_mean(int successes, int trials) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("sample_mean: need 0 <= successes <= trials, trials > 0");
  return static_cast<double>(successes) / trials;
}

/// Shrinks a Bernoulli sample mean toward 1/2: (m sqrt(N) + 1/2) / (sqrt(N) + 1).
inline double hodges_lehmann_estimate(double sample_mean, int n) {
  if (!(sample_mean >= 0.0 && sample_mean <= 1.0))
    throw std::invalid_argument("hodges_lehmann_estimate: sample mean outside [0,1]");
  if (n < 1) throw std::invalid_argument("hodges_lehmann_estimate: sample size must be >= 1");
  const double root = std::sqrt(static_cast<double>(n));
  return (sample_mean * root + 0.5) / (root + 1.0);
}

}  // namespace wald
