#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wald {

/// Slack applied to every feasibility inequality so that decimal grid points
/// sitting exactly on a boundary survive binary rounding.
inline constexpr double feasibility_slack = 1e-12;

/// p[cell] - p[other] must lie in [lambda_minus, lambda_plus].
struct VariationConstraint {
  std::size_t cell = 0;
  std::size_t other = 1;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
};

/// A state of nature: the conditional outcome probability in every cell.
struct State {
  std::vector<double> p;

  std::size_t cells() const noexcept { return p.size(); }
  double operator[](std::size_t k) const { return p.at(k); }
  friend bool operator==(const State&, const State&) = default;
};

/// Box bounds per covariate cell plus pairwise bounded-variation constraints.
/// Construction rejects malformed bounds and empty feasible sets.
class BernoulliStateSpace {
 public:
  BernoulliStateSpace(std::vector<double> lower, std::vector<double> upper,
                      std::vector<VariationConstraint> variation = {})
      : lower_(std::move(lower)), upper_(std::move(upper)), variation_(std::move(variation)) {
    if (lower_.empty() || lower_.size() != upper_.size())
      throw std::invalid_argument("state space: lower/upper bounds must be nonempty and of equal length");
    for (std::size_t k = 0; k < lower_.size(); ++k) {
      if (!(0.0 <= lower_[k] && lower_[k] <= upper_[k] && upper_[k] <= 1.0))
        throw std::invalid_argument("state space: bounds of cell " + std::to_string(k) +
                                    " violate 0 <= lower <= upper <= 1");
    }
    for (const auto& c : variation_) {
      if (c.cell >= cells() || c.other >= cells() || c.cell == c.other)
        throw std::invalid_argument("state space: variation constraint refers to invalid cells");
      if (!(c.lambda_minus <= c.lambda_plus))
        throw std::invalid_argument("state space: variation constraint has lambda_minus > lambda_plus");
    }
    if (!has_feasible_state())
      throw std::invalid_argument("state space: constraints admit no feasible state");
  }

  /// Two cells: p0 boxed in [p0_lower, p0_upper], p1 tied to p0 by the band
  /// p1 + lambda_minus <= p0 <= p1 + lambda_plus. The p1 box is the
  /// projection of that band onto [0, 1].
  static BernoulliStateSpace banded_pair(double p0_lower, double p0_upper, double lambda_minus,
                                         double lambda_plus) {
    const double p1_lower = std::max(0.0, p0_lower - lambda_plus);
    const double p1_upper = std::min(1.0, p0_upper - lambda_minus);
    return BernoulliStateSpace({p0_lower, p1_lower}, {p0_upper, p1_upper},
                               {{0, 1, lambda_minus, lambda_plus}});
  }

  std::size_t cells() const noexcept { return lower_.size(); }
  double lower(std::size_t k) const { return lower_.at(k); }
  double upper(std::size_t k) const { return upper_.at(k); }
  const std::vector<VariationConstraint>& variation() const noexcept { return variation_; }

 private:
  // Box bounds and variation constraints form a system of difference
  // constraints; it is feasible iff the constraint graph (with a zero node
  // anchoring the boxes) has no negative cycle.
  bool has_feasible_state() const {
    const std::size_t nodes = cells() + 1;
    const std::size_t origin = cells();
    struct Edge {
      std::size_t from, to;
      double weight;
    };
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < cells(); ++k) {
      edges.push_back({origin, k, upper_[k] + feasibility_slack});
      edges.push_back({k, origin, -lower_[k] + feasibility_slack});
    }
    for (const auto& c : variation_) {
      edges.push_back({c.other, c.cell, c.lambda_plus + feasibility_slack});
      edges.push_back({c.cell, c.other, -c.lambda_minus + feasibility_slack});
    }
    std::vector<double> dist(nodes, 0.0);
    for (std::size_t round = 0; round < nodes; ++round) {
      bool relaxed = false;
      for (const auto& e : edges) {
        if (dist[e.from] + e.weight < dist[e.to]) {
          dist[e.to] = dist[e.from] + e.weight;
          relaxed = true;
        }
      }
      if (!relaxed) return true;
    }
    return false;
  }

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<VariationConstraint> variation_;
};

/// True iff the state meets every box bound and every variation constraint
/// (inclusive, up to feasibility_slack).
inline bool is_feasible(const State& state, const BernoulliStateSpace& space) {
  if (state.cells() != space.cells())
    throw std::invalid_argument("is_feasible: state has " + std::to_string(state.cells()) +
                                " cells, space has " + std::to_string(space.cells()));
  for (std::size_t k = 0; k < space.cells(); ++k) {
    const double p = state.p[k];
    if (!(p >= space.lower(k) - feasibility_slack && p <= space.upper(k) + feasibility_slack)) return false;
  }
  for (const auto& c : space.variation()) {
    const double diff = state.p[c.cell] - state.p[c.other];
    if (diff < c.lambda_minus - feasibility_slack || diff > c.lambda_plus + feasibility_slack) return false;
  }
  return true;
}

/// Feasible states of a uniform product grid, in lexicographic order with
/// the last cell varying fastest.
class StateGrid {
 public:
  StateGrid(BernoulliStateSpace space, std::vector<std::size_t> resolution, std::vector<State> states)
      : space_(std::move(space)), resolution_(std::move(resolution)), states_(std::move(states)) {}

  const BernoulliStateSpace& space() const noexcept { return space_; }
  const std::vector<std::size_t>& resolution() const noexcept { return resolution_; }
  const std::vector<State>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }
  const State& operator[](std::size_t i) const { return states_.at(i); }
  auto begin() const noexcept { return states_.begin(); }
  auto end() const noexcept { return states_.end(); }

  /// Grid restricted to the given state indices (kept in the given order).
  StateGrid subset(std::span<const std::size_t> indices) const {
    std::vector<State> picked;
    picked.reserve(indices.size());
    for (auto i : indices) picked.push_back(states_.at(i));
    return {space_, resolution_, std::move(picked)};
  }

 private:
  BernoulliStateSpace space_;
  std::vector<std::size_t> resolution_;
  std::vector<State> states_;
};

namespace detail {

/// Steps a mixed-radix counter (last digit fastest). False once it wraps.
inline bool advance_odometer(std::span<std::size_t> digit, std::span<const std::size_t> radix) {
  for (std::size_t k = digit.size(); k > 0; --k) {
    if (++digit[k - 1] < radix[k - 1]) return true;
    digit[k - 1] = 0;
  }
  return false;
}

}  // namespace detail

/// `points` evenly spaced values from lo to hi, both endpoints included.
inline std::vector<double> grid_axis(double lo, double hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("grid_axis: resolution must be at least 2");
  std::vector<double> axis(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) axis[i] = lo + static_cast<double>(i) * step;
  axis.back() = hi;
  return axis;
}

inline StateGrid build_grid(const BernoulliStateSpace& space, std::span<const std::size_t> resolution) {
  if (resolution.size() != space.cells())
    throw std::invalid_argument("build_grid: need one resolution per cell");
  std::vector<std::vector<double>> axes;
  for (std::size_t k = 0; k < space.cells(); ++k)
    axes.push_back(grid_axis(space.lower(k), space.upper(k), resolution[k]));

  std::vector<State> states;
  std::vector<std::size_t> digit(space.cells(), 0);
  State candidate{std::vector<double>(space.cells())};
  do {
    for (std::size_t k = 0; k < space.cells(); ++k) candidate.p[k] = axes[k][digit[k]];
    if (is_feasible(candidate, space)) states.push_back(candidate);
  } while (detail::advance_odometer(digit, resolution));
  if (states.empty())
    throw std::domain_error("build_grid: no feasible grid point at this resolution");
  return {space, {resolution.begin(), resolution.end()}, std::move(states)};
}

inline StateGrid build_grid(const BernoulliStateSpace& space, std::initializer_list<std::size_t> resolution) {
  return build_grid(space, std::span<const std::size_t>(resolution.begin(), resolution.size()));
}

}  // namespace wald
