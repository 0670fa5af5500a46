#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wald/binomial.hpp"
#include "wald/decision_model.hpp"
#include "wald/parallel.hpp"
#include "wald/predictors.hpp"
#include "wald/rng.hpp"
#include "wald/state_space.hpp"

namespace wald {

/// Full enumeration of the product-Binomial sample space.
struct ExactMethod {
  friend bool operator==(const ExactMethod&, const ExactMethod&) = default;
};

/// Seeded Monte Carlo over `draws` simulated samples per state.
struct MonteCarloMethod {
  std::uint64_t draws = 20000;
  std::uint64_t seed = 0;
  friend bool operator==(const MonteCarloMethod&, const MonteCarloMethod&) = default;
};

using Method = std::variant<ExactMethod, MonteCarloMethod>;

inline constexpr std::uint64_t default_enumeration_cap = 10'000'000;

struct EvaluationOptions {
  Method method = ExactMethod{};
  unsigned workers = 1;
  std::uint64_t enumeration_cap = default_enumeration_cap;
};

class enumeration_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expected regret of a binary choice factors as P(wrong action) * gap.
struct RegretDecomposition {
  double error_probability = 0.0;
  double gap = 0.0;
  double expected_regret() const noexcept { return gap * error_probability; }
};

struct RegretReport {
  std::vector<double> regrets;  // aligned with the grid's state order
  double max_regret = 0.0;
  std::size_t argmax_index = 0;
  State argmax_state;
  Method method;
};

namespace detail {

inline void check_cells(const KernelWeights& weights, const SampleDesign& design, std::size_t state_cells,
                        std::size_t target_cell) {
  if (weights.cells() != design.cells() || design.cells() != state_cells)
    throw std::invalid_argument("regret engine: weights, design and state disagree on the number of cells");
  if (target_cell >= design.cells()) throw std::invalid_argument("regret engine: target cell out of range");
}

/// Mixed-radix index over outcome-count vectors, last cell fastest.
class OutcomeLattice {
 public:
  explicit OutcomeLattice(const SampleDesign& design) : sizes_(design.sizes()) {
    size_ = 1;
    for (int n : sizes_) {
      const auto radix = static_cast<std::uint64_t>(n) + 1;
      if (size_ > std::numeric_limits<std::uint64_t>::max() / radix)
        throw enumeration_limit_error("outcome lattice does not fit in 64 bits");
      size_ *= radix;
    }
  }

  std::uint64_t size() const noexcept { return size_; }
  std::size_t cells() const noexcept { return sizes_.size(); }
  const std::vector<int>& sizes() const noexcept { return sizes_; }

  void require_within(std::uint64_t cap) const {
    if (size_ > cap)
      throw enumeration_limit_error("exact enumeration needs " + std::to_string(size_) +
                                    " outcome combinations, cap is " + std::to_string(cap));
  }

  std::uint64_t encode(std::span<const int> counts) const {
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < sizes_.size(); ++k)
      index = index * (static_cast<std::uint64_t>(sizes_[k]) + 1) + static_cast<std::uint64_t>(counts[k]);
    return index;
  }

  void decode(std::uint64_t index, std::span<int> counts) const {
    for (std::size_t k = sizes_.size(); k > 0; --k) {
      const auto radix = static_cast<std::uint64_t>(sizes_[k - 1]) + 1;
      counts[k - 1] = static_cast<int>(index % radix);
      index /= radix;
    }
  }

  /// Calls fn(counts) for every outcome vector in index order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::vector<int> counts(sizes_.size(), 0);
    for (;;) {
      fn(std::span<const int>(counts));
      std::size_t k = sizes_.size();
      for (; k > 0; --k) {
        if (++counts[k - 1] <= sizes_[k - 1]) break;
        counts[k - 1] = 0;
      }
      if (k == 0) return;
    }
  }

 private:
  std::vector<int> sizes_;
  std::uint64_t size_ = 1;
};

/// 1 where as-if optimization with this weighting picks surveillance.
inline std::vector<std::uint8_t> surveillance_mask(const OutcomeLattice& lattice, const KernelWeights& weights,
                                                   const WelfareModel& welfare) {
  std::vector<std::uint8_t> mask;
  mask.reserve(lattice.size());
  lattice.for_each([&](std::span<const int> counts) {
    const double estimate = weighted_average_estimate(counts, lattice.sizes(), weights.values());
    mask.push_back(choose_treatment(estimate, welfare) == Action::surveillance ? 1 : 0);
  });
  return mask;
}

/// Product-Binomial probability of every lattice point in `state`.
inline void joint_pmf(const OutcomeLattice& lattice, const State& state, std::vector<double>& out) {
  std::vector<std::vector<double>> marginals;
  marginals.reserve(lattice.cells());
  for (std::size_t k = 0; k < lattice.cells(); ++k) marginals.push_back(binomial_pmf(lattice.sizes()[k], state.p[k]));
  out.clear();
  out.reserve(lattice.size());
  lattice.for_each([&](std::span<const int> counts) {
    double prob = 1.0;
    for (std::size_t k = 0; k < counts.size(); ++k) prob *= marginals[k][static_cast<std::size_t>(counts[k])];
    out.push_back(prob);
  });
}

inline double error_probability(std::span<const double> joint, std::span<const std::uint8_t> mask,
                                bool surveillance_optimal) {
  const std::uint8_t wrong = surveillance_optimal ? 0 : 1;
  double total = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i)
    if (mask[i] == wrong) total += joint[i];
  return total;
}

/// Distinct simulated outcomes and their multiplicities, in lattice order.
struct DrawHistogram {
  std::vector<std::vector<int>> outcomes;
  std::vector<std::uint64_t> multiplicity;
  std::uint64_t draws = 0;
};

inline DrawHistogram simulate_outcomes(const OutcomeLattice& lattice, const State& state, std::uint64_t draws,
                                       std::uint64_t seed) {
  if (draws == 0) throw std::invalid_argument("monte carlo: draws must be >= 1");
  std::vector<std::vector<double>> marginals;
  for (std::size_t k = 0; k < lattice.cells(); ++k) marginals.push_back(binomial_pmf(lattice.sizes()[k], state.p[k]));
  Rng rng(seed);
  std::vector<std::uint64_t> indices(draws);
  std::vector<int> counts(lattice.cells());
  for (auto& index : indices) {
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] = static_cast<int>(rng.discrete(marginals[k]));
    index = lattice.encode(counts);
  }
  std::sort(indices.begin(), indices.end());
  DrawHistogram hist;
  hist.draws = draws;
  for (std::size_t i = 0; i < indices.size();) {
    std::size_t j = i;
    while (j < indices.size() && indices[j] == indices[i]) ++j;
    lattice.decode(indices[i], counts);
    hist.outcomes.push_back(counts);
    hist.multiplicity.push_back(j - i);
    i = j;
  }
  return hist;
}

inline std::uint64_t count_errors(const DrawHistogram& hist, const KernelWeights& weights,
                                  const SampleDesign& design, const WelfareModel& welfare,
                                  bool surveillance_optimal) {
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < hist.outcomes.size(); ++i) {
    const double estimate = weighted_average_estimate(hist.outcomes[i], design.sizes(), weights.values());
    const bool picks_surveillance = choose_treatment(estimate, welfare) == Action::surveillance;
    if (picks_surveillance != surveillance_optimal) errors += hist.multiplicity[i];
  }
  return errors;
}

/// Expected regret for every (weight, state) pair, row-major by weight.
/// Monte Carlo uses one stream per state (derived from the base seed and the
/// state index) shared by all weights, i.e. common random numbers.
struct RegretMatrix {
  std::size_t weight_count = 0;
  std::size_t state_count = 0;
  std::vector<double> values;

  double at(std::size_t w, std::size_t s) const { return values[w * state_count + s]; }
  std::span<const double> row(std::size_t w) const {
    return std::span<const double>(values).subspan(w * state_count, state_count);
  }
};

inline RegretMatrix regret_matrix(std::span<const KernelWeights> weight_grid, const SampleDesign& design,
                                  const StateGrid& grid, const WelfareModel& welfare, std::size_t target_cell,
                                  const EvaluationOptions& options) {
  if (grid.empty()) throw std::invalid_argument("regret engine: empty state grid");
  if (weight_grid.empty()) throw std::invalid_argument("regret engine: empty weight grid");
  for (const auto& w : weight_grid) check_cells(w, design, grid.space().cells(), target_cell);

  const OutcomeLattice lattice(design);
  RegretMatrix result{weight_grid.size(), grid.size(), std::vector<double>(weight_grid.size() * grid.size(), 0.0)};
  const auto cell = [&](std::size_t w, std::size_t s) -> double& { return result.values[w * grid.size() + s]; };

  if (std::holds_alternative<ExactMethod>(options.method)) {
    lattice.require_within(options.enumeration_cap);
    // Masks are built in blocks so memory stays bounded for large lattices.
    constexpr std::uint64_t mask_budget = std::uint64_t{1} << 26;
    const std::size_t block = static_cast<std::size_t>(std::max<std::uint64_t>(1, mask_budget / lattice.size()));
    for (std::size_t first = 0; first < weight_grid.size(); first += block) {
      const std::size_t last = std::min(weight_grid.size(), first + block);
      std::vector<std::vector<std::uint8_t>> masks(last - first);
      detail::parallel_for(masks.size(), options.workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) masks[i] = surveillance_mask(lattice, weight_grid[first + i], welfare);
      });
      detail::parallel_for(grid.size(), options.workers, [&](std::size_t b, std::size_t e) {
        std::vector<double> joint;
        for (std::size_t s = b; s < e; ++s) {
          const double p = grid[s].p[target_cell];
          const bool surveil = optimal_action(p, welfare) == Action::surveillance;
          const double gap = regret_gap(p, welfare);
          joint_pmf(lattice, grid[s], joint);
          for (std::size_t w = first; w < last; ++w)
            cell(w, s) = gap * error_probability(joint, masks[w - first], surveil);
        }
      });
    }
  } else {
    const auto& mc = std::get<MonteCarloMethod>(options.method);
    detail::parallel_for(grid.size(), options.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) {
        const double p = grid[s].p[target_cell];
        const bool surveil = optimal_action(p, welfare) == Action::surveillance;
        const double gap = regret_gap(p, welfare);
        const auto hist = simulate_outcomes(lattice, grid[s], mc.draws, derive_seed(mc.seed, s));
        for (std::size_t w = 0; w < weight_grid.size(); ++w) {
          const auto errors = count_errors(hist, weight_grid[w], design, welfare, surveil);
          cell(w, s) = gap * (static_cast<double>(errors) / static_cast<double>(mc.draws));
        }
      }
    });
  }
  return result;
}

inline RegretReport make_report(std::span<const double> regrets, const StateGrid& grid, const Method& method) {
  RegretReport report;
  report.regrets.assign(regrets.begin(), regrets.end());
  report.method = method;
  for (std::size_t s = 0; s < regrets.size(); ++s) {
    if (s == 0 || regrets[s] > report.max_regret) {
      report.max_regret = regrets[s];
      report.argmax_index = s;
    }
  }
  report.argmax_state = grid[report.argmax_index];
  return report;
}

}  // namespace detail

/// Exact expected regret split into its error-probability and gap factors.
inline RegretDecomposition exact_regret_decomposition(const KernelWeights& weights, const SampleDesign& design,
                                                      const State& state, const WelfareModel& welfare,
                                                      std::size_t target_cell,
                                                      std::uint64_t enumeration_cap = default_enumeration_cap) {
  detail::check_cells(weights, design, state.cells(), target_cell);
  const detail::OutcomeLattice lattice(design);
  lattice.require_within(enumeration_cap);
  const double p = state.p[target_cell];
  std::vector<double> joint;
  detail::joint_pmf(lattice, state, joint);
  const auto mask = detail::surveillance_mask(lattice, weights, welfare);
  const bool surveil = optimal_action(p, welfare) == Action::surveillance;
  return {detail::error_probability(joint, mask, surveil), regret_gap(p, welfare)};
}

inline double exact_expected_regret(const KernelWeights& weights, const SampleDesign& design, const State& state,
                                    const WelfareModel& welfare, std::size_t target_cell,
                                    std::uint64_t enumeration_cap = default_enumeration_cap) {
  return exact_regret_decomposition(weights, design, state, welfare, target_cell, enumeration_cap).expected_regret();
}

/// Monte Carlo counterpart: the error probability is the fraction of `draws`
/// simulated samples whose as-if choice differs from the optimal action.
inline RegretDecomposition mc_regret_decomposition(const KernelWeights& weights, const SampleDesign& design,
                                                   const State& state, const WelfareModel& welfare,
                                                   std::size_t target_cell, std::uint64_t draws, std::uint64_t seed) {
  detail::check_cells(weights, design, state.cells(), target_cell);
  const detail::OutcomeLattice lattice(design);
  const double p = state.p[target_cell];
  const bool surveil = optimal_action(p, welfare) == Action::surveillance;
  const auto hist = detail::simulate_outcomes(lattice, state, draws, seed);
  const auto errors = detail::count_errors(hist, weights, design, welfare, surveil);
  return {static_cast<double>(errors) / static_cast<double>(draws), regret_gap(p, welfare)};
}

inline double mc_expected_regret(const KernelWeights& weights, const SampleDesign& design, const State& state,
                                 const WelfareModel& welfare, std::size_t target_cell, std::uint64_t draws,
                                 std::uint64_t seed) {
  return mc_regret_decomposition(weights, design, state, welfare, target_cell, draws, seed).expected_regret();
}

/// Expected regret at every grid state and its maximum. Under Monte Carlo,
/// state i uses the stream derive_seed(seed, i).
inline RegretReport max_regret(const KernelWeights& weights, const SampleDesign& design, const StateGrid& grid,
                               const WelfareModel& welfare, std::size_t target_cell,
                               const EvaluationOptions& options = {}) {
  const auto matrix = detail::regret_matrix(std::span(&weights, 1), design, grid, welfare, target_cell, options);
  return detail::make_report(matrix.row(0), grid, options.method);
}

/// Max-regret values within this distance of the minimum count as tied.
inline constexpr double default_mmr_tie_tolerance = 1e-5;

struct WeightSearchResult {
  std::size_t best_index = 0;
  KernelWeights weights{std::vector<double>{1.0}};
  RegretReport report;
  std::vector<double> max_regret_by_weight;
};

/// Minimax-regret weighting over a candidate list. Ties (within
/// tie_tolerance of the minimum) go to the smallest target-cell weight, i.e.
/// the most pooling, then to the earliest candidate.
inline WeightSearchResult mmr_weight_search(std::span<const KernelWeights> weight_grid, const SampleDesign& design,
                                            const StateGrid& grid, const WelfareModel& welfare,
                                            std::size_t target_cell, const EvaluationOptions& options = {},
                                            double tie_tolerance = default_mmr_tie_tolerance) {
  if (!(tie_tolerance >= 0.0)) throw std::invalid_argument("mmr_weight_search: negative tie tolerance");
  const auto matrix = detail::regret_matrix(weight_grid, design, grid, welfare, target_cell, options);
  WeightSearchResult result;
  result.max_regret_by_weight.resize(weight_grid.size());
  for (std::size_t w = 0; w < weight_grid.size(); ++w) {
    const auto row = matrix.row(w);
    result.max_regret_by_weight[w] = *std::max_element(row.begin(), row.end());
  }
  const double best = *std::min_element(result.max_regret_by_weight.begin(), result.max_regret_by_weight.end());
  std::optional<std::size_t> pick;
  for (std::size_t w = 0; w < weight_grid.size(); ++w) {
    if (result.max_regret_by_weight[w] > best + tie_tolerance) continue;
    if (!pick || weight_grid[w][target_cell] < weight_grid[*pick][target_cell]) pick = w;
  }
  result.best_index = *pick;
  result.weights = weight_grid[*pick];
  result.report = detail::make_report(matrix.row(*pick), grid, options.method);
  return result;
}

/// Binary-covariate weightings (w0, 1 - w0) for w0 = start, start + step, ...,
/// stop. Each w0 is the double nearest its decimal value.
inline std::vector<KernelWeights> binary_weight_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(start <= stop) || start < 0.0 || stop > 1.0)
    throw std::invalid_argument("weight grid: need 0 <= start <= stop <= 1 and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<KernelWeights> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double w0 = std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9;
    grid.push_back(KernelWeights::binary(std::min(w0, 1.0)));
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Generic decision criteria over expected-loss tables.

enum class Criterion { bayes, minimax, minimax_regret };

/// Rows are candidate decision rules, columns are states of nature.
class ExpectedLossTable {
 public:
  explicit ExpectedLossTable(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    if (rows_.empty() || rows_.front().empty()) throw std::invalid_argument("loss table: empty");
    for (const auto& row : rows_) {
      if (row.size() != rows_.front().size()) throw std::invalid_argument("loss table: ragged rows");
      for (double v : row)
        if (!std::isfinite(v)) throw std::invalid_argument("loss table: non-finite entry");
    }
  }

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t states() const noexcept { return rows_.front().size(); }
  double operator()(std::size_t r, std::size_t s) const { return rows_.at(r).at(s); }
  const std::vector<std::vector<double>>& data() const noexcept { return rows_; }

 private:
  std::vector<std::vector<double>> rows_;
};

/// Score each row under the criterion (lower is better).
inline std::vector<double> criterion_scores(const ExpectedLossTable& table, Criterion criterion,
                                            std::span<const double> prior = {}) {
  std::vector<double> scores(table.rows(), 0.0);
  switch (criterion) {
    case Criterion::bayes: {
      if (prior.size() != table.states()) throw std::invalid_argument("bayes criterion: prior size must match states");
      double total = 0.0;
      for (double p : prior) {
        if (!(p >= 0.0)) throw std::invalid_argument("bayes criterion: negative prior mass");
        total += p;
      }
      if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("bayes criterion: prior must sum to 1");
      for (std::size_t r = 0; r < table.rows(); ++r)
        for (std::size_t s = 0; s < table.states(); ++s) scores[r] += prior[s] * table(r, s);
      break;
    }
    case Criterion::minimax:
      for (std::size_t r = 0; r < table.rows(); ++r) {
        scores[r] = table(r, 0);
        for (std::size_t s = 1; s < table.states(); ++s) scores[r] = std::max(scores[r], table(r, s));
      }
      break;
    case Criterion::minimax_regret: {
      std::vector<double> column_min(table.states());
      for (std::size_t s = 0; s < table.states(); ++s) {
        column_min[s] = table(0, s);
        for (std::size_t r = 1; r < table.rows(); ++r) column_min[s] = std::min(column_min[s], table(r, s));
      }
      for (std::size_t r = 0; r < table.rows(); ++r) {
        scores[r] = table(r, 0) - column_min[0];
        for (std::size_t s = 1; s < table.states(); ++s) scores[r] = std::max(scores[r], table(r, s) - column_min[s]);
      }
      break;
    }
  }
  return scores;
}

/// Index of the selected row; ties (to 1e-12 relative) go to the lowest index.
inline std::size_t criterion_select(const ExpectedLossTable& table, Criterion criterion,
                                    std::span<const double> prior = {}) {
  const auto scores = criterion_scores(table, criterion, prior);
  double magnitude = 0.0;
  for (const auto& row : table.data())
    for (double v : row) magnitude = std::max(magnitude, std::fabs(v));
  const double tolerance = 1e-12 * magnitude;
  std::size_t best = 0;
  for (std::size_t r = 1; r < scores.size(); ++r)
    if (scores[r] < scores[best] - tolerance) best = r;
  return best;
}

}  // namespace wald
