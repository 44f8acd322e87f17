// Copyright 2026 The rosenblatt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROSENBLATT_GRID_HPP
#define ROSENBLATT_GRID_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/**
 * \file
 * \brief Uniform time grids and sampled functions on them.
 */

namespace rosenblatt {

/// Uniform partition t_i = i T / n of [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps) : horizon_{horizon}, steps_{steps} {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
      throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
    }
    if (steps < 2) {
      throw std::invalid_argument("TimeGrid: at least 2 steps are required");
    }
  }

  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
  [[nodiscard]] std::size_t size() const noexcept { return steps_ + 1; }
  [[nodiscard]] double step() const noexcept { return horizon_ / static_cast<double>(steps_); }
  [[nodiscard]] double node(std::size_t i) const noexcept {
    return horizon_ * static_cast<double>(i) / static_cast<double>(steps_);
  }
  /// Midpoint of cell [t_j, t_{j+1}].
  [[nodiscard]] double midpoint(std::size_t j) const noexcept {
    return horizon_ * (static_cast<double>(j) + 0.5) / static_cast<double>(steps_);
  }

  /// Index of the node closest to t.
  [[nodiscard]] std::size_t nearest(double t) const {
    if (t < 0.0 || t > horizon_ * (1.0 + 1e-12)) {
      throw std::out_of_range("TimeGrid: time outside [0, T]");
    }
    const auto i = static_cast<std::size_t>(std::llround(t / step()));
    return i > steps_ ? steps_ : i;
  }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) noexcept {
    return a.steps_ == b.steps_ && a.horizon_ == b.horizon_;
  }

 private:
  double horizon_;
  std::size_t steps_;
};

inline void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string{where} + ": grid mismatch");
  }
}

/// How a sampled function is reconstructed between nodes.
enum class Interp {
  linear,  ///< continuous, linear on every cell
  step,    ///< constant values[j] on cell [t_j, t_{j+1})
};

/// A real function on [0, T] stored in factored form
///
///   f(y) = y^left_power * (T - y)^right_power * g(y),
///
/// where g is reconstructed from its node values (linearly or stepwise).
/// Power-law endpoint behaviour is carried analytically by the two exponents, so
/// operators can integrate it exactly. The end nodes of `values` may be NaN
/// ("unset") when the regular factor itself has no finite limit there; all
/// other entries must be finite.
struct SampledFunction {
  TimeGrid grid;
  std::vector<double> values;
  double left_power = 0.0;
  double right_power = 0.0;
  Interp interp = Interp::linear;

  SampledFunction(TimeGrid g, std::vector<double> v, double kappa = 0.0, double lambda = 0.0,
                  Interp mode = Interp::linear)
      : grid{g}, values{std::move(v)}, left_power{kappa}, right_power{lambda}, interp{mode} {
    validate();
  }

  void validate() const {
    if (values.size() != grid.size()) {
      throw std::invalid_argument("SampledFunction: expected one value per grid node");
    }
    if (!(left_power > -1.0) || !(right_power > -1.0)) {
      throw std::invalid_argument("SampledFunction: endpoint exponents must exceed -1");
    }
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw std::invalid_argument("SampledFunction: non-finite value at interior node " +
                                    std::to_string(i));
      }
    }
    for (const std::size_t i : {std::size_t{0}, values.size() - 1}) {
      if (std::isinf(values[i])) {
        throw std::invalid_argument("SampledFunction: infinite end value (use NaN for unset)");
      }
    }
  }

  [[nodiscard]] bool unset_at_start() const noexcept { return std::isnan(values.front()); }
  [[nodiscard]] bool unset_at_end() const noexcept { return std::isnan(values.back()); }

  /// Regular factor at node i; unset end nodes borrow their neighbour.
  [[nodiscard]] double regular(std::size_t i) const noexcept {
    if (std::isnan(values[i])) {
      return i == 0 ? values[1] : values[i - 1];
    }
    return values[i];
  }

  /// Regular factor on cell j at local coordinate s in [0, 1].
  [[nodiscard]] double regular_on_cell(std::size_t j, double s) const noexcept {
    if (interp == Interp::step) {
      return regular(j);
    }
    return (1.0 - s) * regular(j) + s * regular(j + 1);
  }

  [[nodiscard]] double weight(double y) const noexcept {
    double w = 1.0;
    if (left_power != 0.0) w *= std::pow(y, left_power);
    if (right_power != 0.0) w *= std::pow(grid.horizon() - y, right_power);
    return w;
  }

  /// Full function value at node i (may be non-finite at an endpoint singularity).
  [[nodiscard]] double at(std::size_t i) const noexcept {
    if (values[i] == 0.0) return 0.0;
    return weight(grid.node(i)) * values[i];
  }

  /// Full function value at an arbitrary point y in [0, T].
  [[nodiscard]] double operator()(double y) const noexcept {
    const double h = grid.step();
    auto j = static_cast<std::size_t>(y / h);
    if (j >= grid.steps()) j = grid.steps() - 1;
    const double s = (y - grid.node(j)) / h;
    const double g = regular_on_cell(j, s);
    return g == 0.0 ? 0.0 : weight(y) * g;
  }

  [[nodiscard]] std::vector<double> node_values() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = at(i);
    return out;
  }
};

/// Samples fn at every node (linear reconstruction, no endpoint factors).
inline SampledFunction sample(const TimeGrid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
  return SampledFunction{grid, std::move(v)};
}

inline SampledFunction constant(const TimeGrid& grid, double c) {
  return SampledFunction{grid, std::vector<double>(grid.size(), c)};
}

/// c * y^beta, carried exactly through the left exponent.
inline SampledFunction power_function(const TimeGrid& grid, double beta, double c = 1.0) {
  return SampledFunction{grid, std::vector<double>(grid.size(), c), beta};
}

/// Step function equal to `inside` on the union of [a, b) intervals and `outside` elsewhere.
/// Interval endpoints are snapped to the nearest grid node.
inline SampledFunction indicator(const TimeGrid& grid,
                                 const std::vector<std::pair<double, double>>& intervals,
                                 double inside = 1.0, double outside = 0.0) {
  std::vector<double> v(grid.size(), outside);
  for (const auto& [a, b] : intervals) {
    if (!(a < b)) {
      throw std::invalid_argument("indicator: empty or reversed interval");
    }
    const std::size_t lo = grid.nearest(a);
    const std::size_t hi = grid.nearest(b);
    for (std::size_t j = lo; j < hi; ++j) v[j] = inside;
  }
  v.back() = v[v.size() - 2];
  return SampledFunction{grid, std::move(v), 0.0, 0.0, Interp::step};
}

/// Continuous (linear) version of 1_{(0, t)}: one on nodes before t, zero from t on.
inline SampledFunction ramp_indicator(const TimeGrid& grid, std::size_t t_index) {
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 0; i < t_index && i < v.size(); ++i) v[i] = 1.0;
  return SampledFunction{grid, std::move(v)};
}

/// Partition of [0, T] that refines the uniform grid inside its first cell: [0, Delta] is
/// split at Delta 2^{-k}, k = 1..head_levels. Used for Wiener increments, so that kernels
/// singular at the origin are resolved where the uniform cells are too coarse.
struct RefinedPartition {
  TimeGrid grid;
  std::size_t head_levels;
  std::vector<double> nodes;

  RefinedPartition(TimeGrid g, std::size_t levels) : grid{g}, head_levels{levels} {
    if (levels > 60) {
      throw std::invalid_argument("RefinedPartition: too many head levels");
    }
    const double h = grid.step();
    nodes.reserve(grid.size() + levels);
    nodes.push_back(0.0);
    for (std::size_t k = levels; k >= 1; --k) nodes.push_back(std::ldexp(h, -static_cast<int>(k)));
    for (std::size_t i = 1; i < grid.size(); ++i) nodes.push_back(grid.node(i));
  }

  [[nodiscard]] std::size_t cells() const noexcept { return nodes.size() - 1; }
  [[nodiscard]] std::size_t head_cells() const noexcept { return head_levels + 1; }
  [[nodiscard]] double width(std::size_t c) const noexcept { return nodes[c + 1] - nodes[c]; }
  /// Partition index of uniform node i.
  [[nodiscard]] std::size_t node_index(std::size_t i) const noexcept {
    return i == 0 ? 0 : i + head_levels;
  }
  /// Uniform cell containing partition cell c.
  [[nodiscard]] std::size_t uniform_cell(std::size_t c) const noexcept {
    return c <= head_levels ? 0 : c - head_levels;
  }
};

}  // namespace rosenblatt

#endif
