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

#ifndef ROSENBLATT_SELFTEST_HPP
#define ROSENBLATT_SELFTEST_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "frac_calc.hpp"
#include "grid.hpp"
#include "kernels.hpp"

/**
 * \file
 * \brief Deterministic invariant checks of the fractional-calculus and kernel layers.
 */

namespace rosenblatt {

struct Check {
  std::string name;
  double error = 0.0;  ///< measured discrepancy
  double limit = 0.0;  ///< pass iff error <= limit
  [[nodiscard]] bool pass() const { return std::isfinite(error) && error <= limit; }
};

struct SelftestOptions {
  std::size_t n = 512;
  double cH_factor = 1.0;  ///< test hook: scales c_H in the isometry checks
};

namespace detail {

inline double sup_gap(const SampledFunction& f, const std::function<double(double)>& want, std::size_t from = 1) {
  double err = 0.0;
  for (std::size_t i = from; i < f.grid.size(); ++i) {
    err = std::max(err, std::abs(f.at(i) - want(f.grid.node(i))));
  }
  return err;
}

}  // namespace detail

/// I^{1/2}1 at x = 1 against 1/Gamma(3/2), relative.
inline Check check_half_integral(std::size_t n) {
  const TimeGrid grid{1.0, n};
  const auto out = left_integral(constant(grid, 1.0), 0.5);
  const double want = 1.0 / gamma_fn(1.5);
  return {"I^{1/2} 1 at x=1", std::abs(out.at(n) / want - 1.0), 5e-3};
}

/// I^{0.3} I^{0.45} f = I^{0.75} f, sup error.
inline Check check_semigroup(std::size_t n) {
  const TimeGrid grid{1.0, n};
  const auto f = sample(grid, [](double x) { return std::exp(-x) + 0.5 * x; });
  const auto two = left_integral(left_integral(f, 0.3), 0.45);
  const auto one = left_integral(f, 0.75);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(two.at(i) - one.at(i)));
  return {"semigroup I^0.3 I^0.45 = I^0.75", err, 1e-2};
}

/// I^{-a} I^{a} f = f for several orders, sup error over the grid.
inline Check check_inversion(std::size_t n) {
  const TimeGrid grid{1.0, n};
  auto fn = [](double x) { return std::cos(3.0 * x) + x * x; };
  const auto f = sample(grid, fn);
  double err = 0.0;
  for (const double a : {0.15, 0.35, 0.5, 0.8}) {
    err = std::max(err, detail::sup_gap(left_derivative(left_integral(f, a), a), fn, 0));
  }
  return {"inversion D^a I^a f = f", err, 1e-2};
}

/// Beta identity over the six reference cases, worst relative error.
inline Check check_beta_identity() {
  double err = 0.0;
  for (const double a : {0.15, 0.25, 0.35}) {
    for (const auto& [u, v] : {std::pair{0.3, 0.7}, std::pair{0.5, 0.9}}) {
      err = std::max(err, std::abs(beta_identity_lhs(a, u, v) / std::pow(std::abs(u - v), 2.0 * a - 1.0) - 1.0));
    }
  }
  return {"Beta identity", err, 1e-2};
}

/// ||d1 K* 1_(0,t)||^2 = t^{2H} and the cross inner product against the FBM covariance.
inline Check check_isometry(std::size_t n, double cH_factor) {
  auto h = make_hurst(0.75);
  h.cH *= cH_factor;
  const TimeGrid grid{1.0, n};
  const std::size_t is = 3 * n / 8;
  const std::size_t it = 7 * n / 8;
  const auto fs = adjoint_op(indicator(grid, {{0.0, grid.node(is)}}), h);
  const auto ft = adjoint_op(indicator(grid, {{0.0, grid.node(it)}}), h);
  const double s = grid.node(is);
  const double t = grid.node(it);
  const double err = std::max(std::abs(inner(ft, ft) / fbm_covariance(t, t, h) - 1.0),
                              std::abs(inner(fs, ft) / fbm_covariance(s, t, h) - 1.0));
  return {"FBM isometry", err, 1e-2};
}

/// Sum of squared Volterra cell averages in the last row against Var B^H_1 = 1.
inline Check check_kernel_variance(std::size_t n, double cH_factor) {
  auto h = make_hurst(0.75);
  h.cH *= cH_factor;
  const TimeGrid grid{1.0, n};
  const auto km = volterra_kernel(h, grid);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += km(n, j) * km(n, j) * grid.step();
  return {"Volterra kernel variance", std::abs(acc - 1.0), 1e-2};
}

/// Closed-form value of K(1, 1/2) at H = 3/4.
inline Check check_kernel_value() {
  const auto h = make_hurst(0.75);
  return {"K(1,0.5) closed form", std::abs(volterra_kernel_value(h, 1.0, 0.5) - 0.937591963698057233), 1e-12};
}

/// Adjoint operator followed by its inverse, relative L2 on the nodes.
inline Check check_adjoint_roundtrip(std::size_t n) {
  const auto h = make_hurst(0.7);
  const TimeGrid grid{1.0, n};
  auto fn = [](double x) { return 1.0 + std::sin(3.0 * x); };
  const auto back = adjoint_op_inverse(adjoint_op(sample(grid, fn), h), h);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d = back.at(i) - fn(grid.node(i));
    num += d * d;
    den += fn(grid.node(i)) * fn(grid.node(i));
  }
  return {"adjoint roundtrip", std::sqrt(num / den), 1e-2};
}

/// K_H^{-1} K_H phi = phi, relative L2 on the nodes.
inline Check check_kh_roundtrip(std::size_t n) {
  const auto h = make_hurst(0.8);
  const TimeGrid grid{1.0, n};
  auto fn = [](double x) { return std::exp(-x) + x; };
  const auto back = kh_inverse(kh_forward(sample(grid, fn), h), h);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d = back.at(i) - fn(grid.node(i));
    num += d * d;
    den += fn(grid.node(i)) * fn(grid.node(i));
  }
  return {"K_H roundtrip", std::sqrt(num / den), 1e-2};
}

/// Total mass of the cell-averaged Rosenblatt kernel against e_H B(1-H/2, H/2)^2 / (H+1).
inline Check check_rosenblatt_mass() {
  const auto h = make_hurst(0.75);
  const TimeGrid grid{1.0, 32};
  const RosenblattKernel rk{h, grid};
  const auto K = rk.cell_kernel(grid.steps());
  const auto& part = rk.partition();
  double mass = 0.0;
  for (Eigen::Index j = 0; j < K.rows(); ++j) {
    for (Eigen::Index k = 0; k < K.cols(); ++k) {
      mass += K(j, k) * part.width(static_cast<std::size_t>(j)) * part.width(static_cast<std::size_t>(k));
    }
  }
  const double b = 0.5 * h.H;
  const double want = h.eH * std::pow(beta_fn(1.0 - b, b), 2) / (h.H + 1.0);
  return {"Rosenblatt kernel mass", std::abs(mass / want - 1.0), 1e-6};
}

inline std::vector<Check> run_selftest(const SelftestOptions& opt = {}) {
  return {check_half_integral(opt.n),
          check_semigroup(opt.n),
          check_inversion(opt.n),
          check_beta_identity(),
          check_kernel_value(),
          check_isometry(opt.n, opt.cH_factor),
          check_kernel_variance(opt.n, opt.cH_factor),
          check_adjoint_roundtrip(opt.n),
          check_kh_roundtrip(opt.n),
          check_rosenblatt_mass()};
}

}  // namespace rosenblatt

#endif
