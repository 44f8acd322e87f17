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

#ifndef ROSENBLATT_FRAC_CALC_HPP
#define ROSENBLATT_FRAC_CALC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <rosenblatt/grid.hpp>
#include <rosenblatt/quadrature.hpp>

/**
 * \file
 * \brief Riemann-Liouville fractional integrals and derivatives on a uniform grid.
 *
 * Every operator integrates the exact power-law kernel against the piecewise
 * reconstruction of the input (product integration). On cells touching a
 * singular point (the evaluation node, y = 0 or y = T) a Gauss-Jacobi rule
 * absorbs the singular factor; elsewhere a Gauss-Legendre rule whose order
 * grows as the cell approaches a singular point is used.
 */

namespace rosenblatt {

enum class Side { left, right };

/// Order alpha of a fractional operator together with its side (0+ or T-).
struct FracOrder {
  double alpha;
  Side side = Side::left;
};

enum class Direction { forward, inverse };

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CellMoments {
  double m0;  ///< against 1 - s
  double m1;  ///< against s
};

/// Moments of w(y) = (x - y)^p y^kappa (T - y)^lambda over cells [t_j, t_{j+1}] with
/// t_{j+1} <= x = t_i, against the two local hat functions.
class LeftEngine {
 public:
  LeftEngine(const TimeGrid& grid, double p, double kappa, double lambda)
      : grid_{grid}, p_{p}, kappa_{kappa}, lambda_{lambda} {}

  CellMoments moments(std::size_t i, std::size_t j) {
    const std::size_t n = grid_.steps();
    const double h = grid_.step();
    const double x = grid_.node(i);
    const double T = grid_.horizon();

    const bool left_sing = (j == 0) && kappa_ != 0.0;
    const bool x_sing = (j + 1 == i) && p_ != 0.0;
    const bool t_sing = (j + 1 == n) && lambda_ != 0.0;

    const double e_left = left_sing ? kappa_ : 0.0;
    const double e_right = (x_sing ? p_ : 0.0) + (t_sing ? lambda_ : 0.0);
    if (!(e_right > -1.0)) {
      return {kNaN, kNaN};
    }

    double scale = h;
    if (left_sing) scale *= std::pow(h, kappa_);
    if (x_sing) scale *= std::pow(h, p_);
    if (t_sing) scale *= std::pow(h, lambda_);

    // Distance (in cells) to the nearest singular point the rule does not absorb.
    std::size_t dist = std::numeric_limits<std::size_t>::max();
    if (kappa_ != 0.0 && !left_sing) dist = std::min(dist, j);
    if (p_ != 0.0 && !x_sing) dist = std::min(dist, i - (j + 1));
    if (lambda_ != 0.0 && !t_sing) dist = std::min(dist, n - (j + 1));
    const std::size_t points = dist <= 1 ? 10 : dist == 2 ? 6 : dist == 3 ? 5 : 4;

    const JacobiRule& rule = cache_.get(e_left, e_right, points);
    const double t0 = grid_.node(j);
    double m0 = 0.0;
    double m1 = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double s = rule.nodes[q];
      const double y = t0 + h * s;
      double w = rule.weights[q];
      if (kappa_ != 0.0 && !left_sing) w *= std::pow(y, kappa_);
      if (p_ != 0.0 && !x_sing) w *= std::pow(x - y, p_);
      if (lambda_ != 0.0 && !t_sing) w *= std::pow(T - y, lambda_);
      m0 += w * (1.0 - s);
      m1 += w * s;
    }
    return {scale * m0, scale * m1};
  }

 private:
  TimeGrid grid_;
  double p_;
  double kappa_;
  double lambda_;
  RuleCache cache_;
};

inline double combine(const SampledFunction& f, std::size_t j, const CellMoments& m) {
  if (f.interp == Interp::step) {
    return f.regular(j) * (m.m0 + m.m1);
  }
  return f.regular(j) * m.m0 + f.regular(j + 1) * m.m1;
}

/// sum_j int_{cell j} (t_i - y)^p y^kappa (T-y)^lambda g(y) dy for every node i >= 1.
template <class Cellwise>
std::vector<double> left_sums(const TimeGrid& grid, double p, double kappa, double lambda,
                              Cellwise&& cellwise) {
  LeftEngine engine{grid, p, kappa, lambda};
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) acc += cellwise(j, engine.moments(i, j));
    out[i] = acc;
  }
  return out;
}

inline std::size_t product_points(std::size_t j, std::size_t n, bool left_weight, bool right_weight) {
  std::size_t dist = std::numeric_limits<std::size_t>::max();
  if (left_weight && j > 0) dist = std::min(dist, j);
  if (right_weight && j + 1 < n) dist = std::min(dist, n - (j + 1));
  return dist <= 1 ? 10 : dist == 2 ? 6 : dist == 3 ? 5 : 4;
}

}  // namespace detail

/// Reflection y -> T - y; swaps the roles of the two endpoint exponents.
inline SampledFunction mirrored(const SampledFunction& f) {
  const std::size_t n = f.grid.steps();
  std::vector<double> v(f.values.size());
  if (f.interp == Interp::step) {
    for (std::size_t k = 0; k < n; ++k) v[k] = f.values[n - 1 - k];
    v[n] = v[n - 1];
  } else {
    std::reverse_copy(f.values.begin(), f.values.end(), v.begin());
  }
  return SampledFunction{f.grid, std::move(v), f.right_power, f.left_power, f.interp};
}

inline SampledFunction times_power(SampledFunction f, double gamma) {
  f.left_power += gamma;
  f.validate();
  return f;
}

inline SampledFunction scaled(SampledFunction f, double c) {
  for (double& v : f.values) v *= c;
  return f;
}

inline SampledFunction zeros_like(const SampledFunction& f) {
  return SampledFunction{f.grid, std::vector<double>(f.grid.size(), 0.0)};
}

/// Left Riemann-Liouville integral (I^alpha_{0+} f). The result carries the
/// exponent kappa + alpha at the origin.
inline SampledFunction left_integral(const SampledFunction& f, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("frac_integral: order must be positive");
  }
  const TimeGrid& grid = f.grid;
  const double kappa = f.left_power;
  const double lambda = f.right_power;
  const double inv_gamma = 1.0 / gamma_fn(alpha);
  auto sums = detail::left_sums(grid, alpha - 1.0, kappa, lambda,
                                [&](std::size_t j, const detail::CellMoments& m) {
                                  return detail::combine(f, j, m);
                                });
  const double out_power = kappa + alpha;
  std::vector<double> g(grid.size());
  g[0] = std::pow(grid.horizon(), lambda) * f.regular(0) * gamma_fn(kappa + 1.0) /
         gamma_fn(out_power + 1.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    g[i] = inv_gamma * sums[i] / std::pow(grid.node(i), out_power);
  }
  return SampledFunction{grid, std::move(g), out_power, 0.0};
}

/// Left Riemann-Liouville derivative (I^{-alpha}_{0+} f), computed as the exact
/// derivative of the product-integrated I^{1-alpha} f. Requires a continuous input.
inline SampledFunction left_derivative(const SampledFunction& f, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("frac_derivative: order must lie in (0, 1)");
  }
  if (f.interp != Interp::linear) {
    throw std::invalid_argument("frac_derivative: input must be continuous (linear reconstruction)");
  }
  const TimeGrid& grid = f.grid;
  const double kappa = f.left_power;
  const double lambda = f.right_power;
  const double out_power = kappa - alpha;
  if (!(out_power > -1.0)) {
    throw std::domain_error("frac_derivative: result is not integrable at the origin");
  }
  const double h = grid.step();
  const double p = -alpha;

  // d/dx int_0^x (x-y)^{-a} y^k G(y) dy
  //   = x^{-1} [ (1 - a + k) J(x) + int_0^x (x-y)^{-a} y^{k+1} G'(y) dy ],
  // with G = (T-y)^lambda g and g' piecewise constant.
  auto J = detail::left_sums(grid, p, kappa, lambda, [&](std::size_t j, const detail::CellMoments& m) {
    return detail::combine(f, j, m);
  });
  auto A = detail::left_sums(grid, p, kappa + 1.0, lambda,
                             [&](std::size_t j, const detail::CellMoments& m) {
                               const double slope = (f.regular(j + 1) - f.regular(j)) / h;
                               return slope * (m.m0 + m.m1);
                             });
  std::vector<double> B(grid.size(), 0.0);
  if (lambda != 0.0) {
    B = detail::left_sums(grid, p, kappa + 1.0, lambda - 1.0,
                          [&](std::size_t j, const detail::CellMoments& m) {
                            return lambda * detail::combine(f, j, m);
                          });
  }
  const double inv_gamma = 1.0 / gamma_fn(1.0 - alpha);
  std::vector<double> g(grid.size());
  g[0] = std::pow(grid.horizon(), lambda) * f.regular(0) * gamma_fn(kappa + 1.0) /
         gamma_fn(kappa + 1.0 - alpha);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x = grid.node(i);
    const double d = inv_gamma / x * ((1.0 - alpha + kappa) * J[i] + A[i] - B[i]);
    g[i] = d / std::pow(x, out_power);
  }
  if (!std::isfinite(g.back())) g.back() = detail::kNaN;
  return SampledFunction{grid, std::move(g), out_power, 0.0};
}

inline SampledFunction right_integral(const SampledFunction& f, double alpha) {
  return mirrored(left_integral(mirrored(f), alpha));
}

inline SampledFunction right_derivative(const SampledFunction& f, double alpha) {
  return mirrored(left_derivative(mirrored(f), alpha));
}

/// Riemann-Liouville fractional integral of order o.alpha > 0 on the requested side.
inline SampledFunction frac_integral(const SampledFunction& f, FracOrder o) {
  return o.side == Side::left ? left_integral(f, o.alpha) : right_integral(f, o.alpha);
}

/// Riemann-Liouville fractional derivative of order o.alpha in (0, 1).
inline SampledFunction frac_derivative(const SampledFunction& f, FracOrder o) {
  return o.side == Side::left ? left_derivative(f, o.alpha) : right_derivative(f, o.alpha);
}

/// x^alpha I^alpha_{0+}(y^{-alpha} f) (forward) and its inverse x^alpha I^{-alpha}_{0+}(y^{-alpha} f).
inline SampledFunction weighted_frac_op(const SampledFunction& f, double alpha, Direction dir) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("weighted_frac_op: order must lie in (0, 1/2)");
  }
  const SampledFunction weighted = times_power(f, -alpha);
  SampledFunction out = dir == Direction::forward ? left_integral(weighted, alpha)
                                                  : left_derivative(weighted, alpha);
  return times_power(std::move(out), alpha);
}

/// Integrals of f * g over every cell (g optional: pass nullptr for f alone).
inline std::vector<double> product_cell_integrals(const SampledFunction& f,
                                                  const SampledFunction* g = nullptr) {
  const TimeGrid& grid = f.grid;
  if (g != nullptr) require_same_grid(grid, g->grid, "product_cell_integrals");
  const std::size_t n = grid.steps();
  const double h = grid.step();
  const double T = grid.horizon();
  const double kappa = f.left_power + (g ? g->left_power : 0.0);
  const double lambda = f.right_power + (g ? g->right_power : 0.0);
  if (!(kappa > -1.0) || !(lambda > -1.0)) {
    throw std::domain_error("product_cell_integrals: product is not integrable");
  }
  RuleCache cache;
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const bool ls = j == 0 && kappa != 0.0;
    const bool rs = j + 1 == n && lambda != 0.0;
    const double el = ls ? kappa : 0.0;
    const double er = rs ? lambda : 0.0;
    double scale = h;
    if (ls) scale *= std::pow(h, kappa);
    if (rs) scale *= std::pow(h, lambda);
    const std::size_t pts =
        std::max<std::size_t>(detail::product_points(j, n, kappa != 0.0, lambda != 0.0), 6);
    const JacobiRule& rule = cache.get(el, er, pts);
    const double t0 = grid.node(j);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double s = rule.nodes[q];
      const double y = t0 + h * s;
      double w = rule.weights[q] * f.regular_on_cell(j, s);
      if (g) w *= g->regular_on_cell(j, s);
      if (kappa != 0.0 && !ls) w *= std::pow(y, kappa);
      if (lambda != 0.0 && !rs) w *= std::pow(T - y, lambda);
      acc += w;
    }
    out[j] = scale * acc;
  }
  return out;
}

/// int_0^T f.
inline double integral(const SampledFunction& f) {
  const auto cells = product_cell_integrals(f);
  double acc = 0.0;
  for (double c : cells) acc += c;
  return acc;
}

/// int_0^T f g.
inline double inner(const SampledFunction& f, const SampledFunction& g) {
  const auto cells = product_cell_integrals(f, &g);
  double acc = 0.0;
  for (double c : cells) acc += c;
  return acc;
}

/// Cell averages (1/Delta) int_{t_j}^{t_{j+1}} f, one per cell.
inline std::vector<double> cell_averages(const SampledFunction& f) {
  auto cells = product_cell_integrals(f);
  const double h = f.grid.step();
  for (double& c : cells) c /= h;
  return cells;
}

/// Integrals of f over the cells of a refined partition.
inline std::vector<double> partition_cell_integrals(const SampledFunction& f,
                                                    const RefinedPartition& part) {
  require_same_grid(f.grid, part.grid, "partition_cell_integrals");
  const auto uniform = product_cell_integrals(f);
  std::vector<double> out(part.cells());
  const std::size_t head = part.head_cells();
  if (head == 1) {
    out[0] = uniform[0];
  } else {
    const JacobiRule first = make_jacobi_rule(f.left_power, 0.0, 10);
    const JacobiRule plain = gauss_legendre(10);
    const double h = f.grid.step();
    const double T = f.grid.horizon();
    for (std::size_t c = 0; c < head; ++c) {
      const double lo = part.nodes[c];
      const double w = part.width(c);
      double acc = 0.0;
      if (c == 0) {
        for (std::size_t q = 0; q < first.size(); ++q) {
          const double y = w * first.nodes[q];
          double v = f.regular_on_cell(0, y / h);
          if (f.right_power != 0.0) v *= std::pow(T - y, f.right_power);
          acc += first.weights[q] * v;
        }
        acc *= std::pow(w, f.left_power + 1.0);
      } else {
        for (std::size_t q = 0; q < plain.size(); ++q) acc += plain.weights[q] * f(lo + w * plain.nodes[q]);
        acc *= w;
      }
      out[c] = acc;
    }
  }
  for (std::size_t c = head; c < out.size(); ++c) out[c] = uniform[c - head + 1];
  return out;
}

/// Running integrals int_0^{t_i} f g at every node (g optional).
inline std::vector<double> cumulative_integral(const SampledFunction& f,
                                               const SampledFunction* g = nullptr) {
  const auto cells = product_cell_integrals(f, g);
  std::vector<double> out(cells.size() + 1, 0.0);
  for (std::size_t j = 0; j < cells.size(); ++j) out[j + 1] = out[j] + cells[j];
  return out;
}

/// Ordinary derivative of a continuous sampled function; the regular factor is
/// differentiated with second-order finite differences.
inline SampledFunction derivative(const SampledFunction& f) {
  if (f.interp != Interp::linear) {
    throw std::invalid_argument("derivative: input must be continuous");
  }
  if (f.right_power != 0.0) {
    throw std::invalid_argument("derivative: a (T - y) factor is not supported");
  }
  const TimeGrid& grid = f.grid;
  const std::size_t n = grid.steps();
  const double h = grid.step();
  std::vector<double> dg(grid.size());
  dg[0] = (-3.0 * f.regular(0) + 4.0 * f.regular(1) - f.regular(2)) / (2.0 * h);
  dg[n] = (3.0 * f.regular(n) - 4.0 * f.regular(n - 1) + f.regular(n - 2)) / (2.0 * h);
  for (std::size_t i = 1; i < n; ++i) dg[i] = (f.regular(i + 1) - f.regular(i - 1)) / (2.0 * h);

  const double kappa = f.left_power;
  if (kappa == 0.0) {
    return SampledFunction{grid, std::move(dg)};
  }
  if (!(kappa > 0.0)) {
    throw std::domain_error("derivative: y^kappa with kappa < 0 has a non-integrable derivative");
  }
  // (y^k g)' = y^{k-1} (k g + y g').
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = kappa * f.regular(i) + grid.node(i) * dg[i];
  }
  return SampledFunction{grid, std::move(out), kappa - 1.0};
}

/// Both sides of the fractional integration-by-parts identity, evaluated independently:
/// ( int f I^alpha_{0+} g , int (I^alpha_{T-} f) g ).
inline std::pair<double, double> integration_by_parts_check(const SampledFunction& f,
                                                            const SampledFunction& g,
                                                            double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("integration_by_parts_check: order must lie in (0, 1)");
  }
  require_same_grid(f.grid, g.grid, "integration_by_parts_check");
  const double lhs = inner(f, left_integral(g, alpha));
  const double rhs = inner(right_integral(f, alpha), g);
  return {lhs, rhs};
}

/// Discrete L2([0, T]) norm.
inline double l2_norm(const SampledFunction& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

}  // namespace rosenblatt

#endif
