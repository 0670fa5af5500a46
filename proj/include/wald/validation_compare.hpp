#pragma once

#include <algorithm>
#include <cstddef>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wald/binomial.hpp"
#include "wald/parallel.hpp"
#include "wald/predictors.hpp"
#include "wald/regret_engine.hpp"
#include "wald/rng.hpp"
#include "wald/state_space.hpp"

namespace wald {

/// K-fold cross-validation over a list of candidate weightings.
/// folds == leave_one_out puts each target-cell observation in its own fold.
struct CvProtocol {
  static constexpr std::size_t leave_one_out = 0;

  std::size_t folds = leave_one_out;
  std::vector<KernelWeights> weight_grid;
  std::uint64_t seed = 0;
};

struct CvSelection {
  std::size_t index = 0;
  std::vector<double> cv_error;  // mean held-out squared error per candidate
};

namespace detail {

inline CvSelection kfold_cv(const OutcomeCounts& counts, const SampleDesign& design, std::size_t target_cell,
                            const CvProtocol& protocol, std::uint64_t seed) {
  counts.check_against(design);
  if (target_cell >= design.cells()) throw std::invalid_argument("kfold_cv: target cell out of range");
  if (protocol.weight_grid.empty()) throw std::invalid_argument("kfold_cv: empty weight grid");
  for (const auto& w : protocol.weight_grid)
    if (w.cells() != design.cells()) throw std::invalid_argument("kfold_cv: weight and design cell counts differ");

  const auto size = static_cast<std::size_t>(design[target_cell]);
  const std::size_t folds = protocol.folds == CvProtocol::leave_one_out ? size : protocol.folds;
  if (protocol.folds != CvProtocol::leave_one_out && protocol.folds < 2)
    throw std::invalid_argument("kfold_cv: need at least 2 folds");
  if (folds == 0 || folds > size)
    throw std::invalid_argument("kfold_cv: " + std::to_string(folds) + " folds over " + std::to_string(size) +
                                " target observations leaves an empty fold");

  // Target-cell outcomes (successes first), shuffled, dealt round-robin.
  std::vector<int> outcome(size, 0);
  std::fill_n(outcome.begin(), counts[target_cell], 1);
  Rng rng(seed);
  for (std::size_t i = size; i > 1; --i) std::swap(outcome[i - 1], outcome[rng.uniform_index(i)]);
  std::vector<int> held_size(folds, 0), held_success(folds, 0);
  for (std::size_t i = 0; i < size; ++i) {
    ++held_size[i % folds];
    held_success[i % folds] += outcome[i];
  }

  CvSelection selection;
  selection.cv_error.assign(protocol.weight_grid.size(), 0.0);
  std::vector<int> train_counts = counts.counts();
  std::vector<int> train_sizes = design.sizes();
  for (std::size_t f = 0; f < folds; ++f) {
    train_counts[target_cell] = counts[target_cell] - held_success[f];
    train_sizes[target_cell] = design[target_cell] - held_size[f];
    const int ones = held_success[f];
    const int zeros = held_size[f] - held_success[f];
    for (std::size_t w = 0; w < protocol.weight_grid.size(); ++w) {
      const double fit = weighted_average_estimate(train_counts, train_sizes, protocol.weight_grid[w].values());
      selection.cv_error[w] += ones * (1.0 - fit) * (1.0 - fit) + zeros * fit * fit;
    }
  }
  for (double& e : selection.cv_error) e /= static_cast<double>(size);

  std::size_t best = 0;
  for (std::size_t w = 1; w < protocol.weight_grid.size(); ++w) {
    const double diff = selection.cv_error[w] - selection.cv_error[best];
    const bool tied = std::fabs(diff) <= 1e-12;
    if (diff < 0.0 && !tied) best = w;
    else if (tied && protocol.weight_grid[w][target_cell] < protocol.weight_grid[best][target_cell]) best = w;
  }
  selection.index = best;
  return selection;
}

}  // namespace detail

/// Only target-cell observations are held out; other cells always stay in
/// the training part. Ties within 1e-12 go to the smallest target weight.
inline CvSelection kfold_cv(const OutcomeCounts& counts, const SampleDesign& design, std::size_t target_cell,
                            const CvProtocol& protocol) {
  return detail::kfold_cv(counts, design, target_cell, protocol, protocol.seed);
}

inline KernelWeights kfold_weight_select(const OutcomeCounts& counts, const SampleDesign& design,
                                         std::size_t target_cell, const CvProtocol& protocol) {
  return protocol.weight_grid[kfold_cv(counts, design, target_cell, protocol).index];
}

struct CvComparison {
  std::vector<double> max_regret_by_weight;
  std::size_t mmr_index = 0;
  double mmr_value = 0.0;
  std::vector<std::size_t> selected;         // CV pick per replication
  std::vector<std::uint64_t> selection_histogram;  // per candidate weight
  std::vector<double> ratios;                // max regret of pick / MMR, per replication

  double ratio_mean() const {
    return ratios.empty() ? 0.0 : std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
  }
  double ratio_max() const { return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end()); }
  double ratio_min() const { return ratios.empty() ? 0.0 : *std::min_element(ratios.begin(), ratios.end()); }
  double ratio_quantile(double q) const {
    if (ratios.empty()) return 0.0;
    auto sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const auto pos = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1) + 0.5);
    return sorted[std::min(pos, sorted.size() - 1)];
  }
};

/// Draws `replications` training samples from `generating_state`, picks a
/// weighting for each by cross-validation, and compares the max regret of
/// each pick with the minimax-regret weighting on the same candidate list.
/// Replication r uses the stream derive_seed(protocol.seed, r).
inline CvComparison compare_cv_vs_mmr(const SampleDesign& design, const StateGrid& grid, const WelfareModel& welfare,
                                      const CvProtocol& protocol, std::size_t replications,
                                      const State& generating_state, std::size_t target_cell,
                                      const EvaluationOptions& options = {},
                                      double tie_tolerance = default_mmr_tie_tolerance) {
  if (replications == 0) throw std::invalid_argument("compare_cv_vs_mmr: replications must be >= 1");
  if (!is_feasible(generating_state, grid.space()))
    throw std::invalid_argument("compare_cv_vs_mmr: generating state is outside the state space");

  const auto search = mmr_weight_search(protocol.weight_grid, design, grid, welfare, target_cell, options, tie_tolerance);
  CvComparison out;
  out.max_regret_by_weight = search.max_regret_by_weight;
  out.mmr_index = search.best_index;
  out.mmr_value = search.max_regret_by_weight[search.best_index];
  out.selected.assign(replications, 0);

  std::vector<std::vector<double>> marginals;
  for (std::size_t k = 0; k < design.cells(); ++k) marginals.push_back(binomial_pmf(design[k], generating_state.p[k]));

  detail::parallel_for(replications, options.workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) {
      Rng rng(derive_seed(protocol.seed, r));
      std::vector<int> sample(design.cells());
      for (std::size_t k = 0; k < design.cells(); ++k) sample[k] = static_cast<int>(rng.discrete(marginals[k]));
      const std::uint64_t shuffle_seed = rng.next();
      out.selected[r] = detail::kfold_cv(OutcomeCounts(sample, design), design, target_cell, protocol, shuffle_seed).index;
    }
  });

  out.selection_histogram.assign(protocol.weight_grid.size(), 0);
  out.ratios.reserve(replications);
  for (auto idx : out.selected) {
    ++out.selection_histogram[idx];
    const double picked = out.max_regret_by_weight[idx];
    out.ratios.push_back(out.mmr_value > 0.0 ? picked / out.mmr_value : (picked > 0.0 ? std::numeric_limits<double>::infinity() : 1.0));
  }
  return out;
}

}  // namespace wald
