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

#ifndef ROSENBLATT_KERNELS_HPP
#define ROSENBLATT_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "frac_calc.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

/**
 * \file
 * \brief Hurst constants, the Volterra kernel of fractional Brownian motion, the
 * Rosenblatt kernel and the operators built on them.
 */

namespace rosenblatt {

/// Hurst index H in (1/2, 1) with its normalising constants.
struct HurstParam {
  double H;
  double cH;     ///< Volterra kernel constant for H
  double dH;     ///< Rosenblatt normalisation
  double eH;     ///< cHalf^2 * dH
  double cHalf;  ///< Volterra constant for H/2 + 1/2
};

/// sqrt(H (2H - 1) / B(2 - 2H, H - 1/2)).
inline double volterra_constant(double H) {
  return std::sqrt(H * (2.0 * H - 1.0) / beta_fn(2.0 - 2.0 * H, H - 0.5));
}

inline HurstParam make_hurst(double H) {
  if (!(H > 0.5 && H < 1.0)) {
    throw std::invalid_argument("make_hurst: H must lie in (1/2, 1), got " + std::to_string(H));
  }
  HurstParam p{};
  p.H = H;
  p.cH = volterra_constant(H);
  p.dH = 1.0 / ((H + 1.0) * std::sqrt(H / (2.0 * (2.0 * H - 1.0))));
  p.cHalf = volterra_constant(0.5 * H + 0.5);
  p.eH = p.cHalf * p.cHalf * p.dH;
  return p;
}

/// Covariance of fractional Brownian motion, 0.5 (s^2H + t^2H - |t - s|^2H).
inline double fbm_covariance(double s, double t, const HurstParam& h) {
  const double e = 2.0 * h.H;
  return 0.5 * (std::pow(s, e) + std::pow(t, e) - std::pow(std::abs(t - s), e));
}

/// Lower-triangular kernel on a grid: entries(i, j) is the average of K(t_i, .) over
/// cell [t_j, t_{j+1}], zero for j >= i.
struct KernelMatrix {
  TimeGrid grid;
  Eigen::MatrixXd entries;

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
    return entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Debug dump: one "row,col,value" line per stored entry.
  void write_csv(std::ostream& os) const {
    const auto old = os.precision(17);
    os << "row,col,value\n";
    for (Eigen::Index i = 0; i < entries.rows(); ++i) {
      for (Eigen::Index j = 0; j < entries.cols(); ++j) {
        os << i << ',' << j << ',' << entries(i, j) << '\n';
      }
    }
    os.precision(old);
  }
};

namespace detail {

/// N(sigma) = int_sigma^1 x^{-2a-1} (1 - x)^{a-1} dx and the scaled primitive of the
/// Volterra kernel, P(sigma) = int_0^sigma K(1, r) dr.
class VolterraPrimitive {
 public:
  explicit VolterraPrimitive(const HurstParam& h)
      : a_{h.H - 0.5}, cH_{h.cH}, rule_{make_jacobi_rule(0.0, a_ - 1.0, 20)} {
    n_half_ = upper(0.5);
  }

  [[nodiscard]] double tail(double sigma) const {
    if (sigma >= 1.0) return 0.0;
    if (sigma > 0.5) return upper(sigma);
    // (1 - x)^{a-1} = sum_m c_m x^m converges geometrically on (0, 1/2].
    double acc = n_half_ + (std::pow(sigma, -2.0 * a_) - std::pow(2.0, 2.0 * a_)) / (2.0 * a_);
    double c = 1.0;
    for (int m = 1; m < 80; ++m) {
      c *= (m - a_) / m;
      const double e = m - 2.0 * a_;
      acc += c * (std::pow(0.5, e) - std::pow(sigma, e)) / e;
      if (c * std::pow(0.5, e) < 1e-18) break;
    }
    return acc;
  }

  [[nodiscard]] double primitive(double sigma) const {
    if (sigma <= 0.0) return 0.0;
    const double s = std::min(sigma, 1.0);
    return cH_ / (1.0 + a_) * (incomplete_beta(1.0 - a_, a_, s) + std::pow(s, 1.0 + a_) * tail(s));
  }

  /// K(1, sigma) = cH sigma^a N(sigma).
  [[nodiscard]] double pointwise(double sigma) const {
    return cH_ * std::pow(sigma, a_) * tail(sigma);
  }

 private:
  [[nodiscard]] double upper(double sigma) const {
    const double w = 1.0 - sigma;
    const double acc =
        rule_.integrate([&](double s) { return std::pow(sigma + w * s, -2.0 * a_ - 1.0); });
    return std::pow(w, a_) * acc;
  }

  double a_;
  double cH_;
  JacobiRule rule_;
  double n_half_ = 0.0;
};

}  // namespace detail

/// Pointwise Volterra kernel K_H(t, s) = cH s^{1/2-H} int_s^t u^{H-1/2} (u-s)^{H-3/2} du.
inline double volterra_kernel_value(const HurstParam& h, double t, double s) {
  if (!(s > 0.0) || s >= t) return 0.0;
  const detail::VolterraPrimitive prim{h};
  return std::pow(t, h.H - 0.5) * prim.pointwise(s / t);
}

/// Cell-averaged Volterra kernel on the grid, exact up to rounding.
inline KernelMatrix volterra_kernel(const HurstParam& h, const TimeGrid& grid) {
  const std::size_t n = grid.steps();
  const double a = h.H - 0.5;
  const detail::VolterraPrimitive prim{h};
  KernelMatrix km{grid, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1),
                                              static_cast<Eigen::Index>(n))};
  parallel_for(n, [&](std::size_t r) {
    const std::size_t i = r + 1;
    const double ti = grid.node(i);
    const double scale = std::pow(ti, a) * static_cast<double>(i);
    double prev = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double next = prim.primitive(static_cast<double>(j + 1) / static_cast<double>(i));
      km.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = scale * (next - prev);
      prev = next;
    }
  });
  return km;
}

/// d/du K_H(u, s) = cH (u/s)^{H-1/2} (u - s)^{H-3/2} for 0 < s < u.
inline double volterra_kernel_deriv(const HurstParam& h, double u, double s) {
  if (!(s > 0.0) || !(s < u)) {
    throw std::domain_error("volterra_kernel_deriv: requires 0 < s < u");
  }
  return h.cH * std::pow(u / s, h.H - 0.5) * std::pow(u - s, h.H - 1.5);
}

namespace detail {

/// int_0^L v^{p} (v + d)^{q} (c + v)^{r} dv with d > 0, split where the second factor
/// stops being nearly singular.
inline double split_singular_integral(double L, double d, double c, double p, double q, double r) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double v) { return std::pow(v, p) * std::pow(v + d, q) * std::pow(c + v, r); };
  const double mid = std::min(d, L);
  double acc = ts.integrate(f, 0.0, mid);
  if (L > mid) {
    double lo = mid;
    while (lo < L) {
      const double hi = std::min(L, 4.0 * lo);
      acc += ts.integrate(f, lo, hi);
      lo = hi;
    }
  }
  return acc;
}

}  // namespace detail

/// Rosenblatt kernel e_H (y1 y2)^{-H/2} int_{y1 v y2}^t u^H (u-y1)^{H/2-1} (u-y2)^{H/2-1} du.
/// Infinite on the diagonal y1 = y2 < t.
inline double rosenblatt_kernel(const HurstParam& h, double t, double y1, double y2) {
  if (!(y1 > 0.0) || !(y2 > 0.0)) {
    throw std::domain_error("rosenblatt_kernel: arguments must be positive (use cell averages at 0)");
  }
  const double hi = std::max(y1, y2);
  const double lo = std::min(y1, y2);
  if (hi >= t) return 0.0;
  if (hi == lo) return std::numeric_limits<double>::infinity();
  const double b = 0.5 * h.H;
  const double inner =
      detail::split_singular_integral(t - hi, hi - lo, hi, b - 1.0, b - 1.0, h.H);
  return h.eH * std::pow(y1 * y2, -b) * inner;
}

/// Left side of the Beta identity
///   (uv)^a / B(1 - 2a, a) int_0^{u^v} y^{-2a} (u - y)^{a-1} (v - y)^{a-1} dy = |u - v|^{2a-1},
/// evaluated by product integration on `cells` uniform cells.
inline double beta_identity_lhs(double alpha, double u, double v, std::size_t cells = 512) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("beta_identity_lhs: alpha must lie in (0, 1/2)");
  }
  if (!(u > 0.0) || !(v > 0.0) || u == v) {
    throw std::invalid_argument("beta_identity_lhs: need distinct positive u, v");
  }
  const double m = std::min(u, v);
  const double M = std::max(u, v);
  const TimeGrid grid{m, cells};
  auto f = sample(grid, [&](double y) { return std::pow(M - y, alpha - 1.0); });
  f.left_power = -2.0 * alpha;
  f.right_power = alpha - 1.0;
  return std::pow(u * v, alpha) / beta_fn(1.0 - 2.0 * alpha, alpha) * integral(f);
}

/// (d1 K*) f(s) = cH Gamma(H - 1/2) s^{-(H-1/2)} I^{H-1/2}_{T-}(u^{H-1/2} f)(s).
inline SampledFunction adjoint_op(const SampledFunction& f, const HurstParam& h) {
  const double a = h.H - 0.5;
  auto out = times_power(right_integral(times_power(f, a), a), -a);
  return scaled(std::move(out), h.cH * gamma_fn(a));
}

/// Right inverse of adjoint_op: cH^{-1} Gamma(H-1/2)^{-1} s^{-(H-1/2)} I^{-(H-1/2)}_{T-}(u^{H-1/2} psi).
inline SampledFunction adjoint_op_inverse(const SampledFunction& psi, const HurstParam& h) {
  const double a = h.H - 0.5;
  auto out = times_power(right_derivative(times_power(psi, a), a), -a);
  return scaled(std::move(out), 1.0 / (h.cH * gamma_fn(a)));
}

/// (K_H phi)(t) = int_0^t K_H(t, s) phi(s) ds = cH Gamma(a) int_0^t u^a I^a_{0+}(s^{-a} phi)(u) du.
inline SampledFunction kh_forward(const SampledFunction& phi, const HurstParam& h) {
  const double a = h.H - 0.5;
  const auto inner = times_power(left_integral(times_power(phi, -a), a), a);
  auto cum = cumulative_integral(inner);
  for (double& v : cum) v *= h.cH * gamma_fn(a);
  return SampledFunction{phi.grid, std::move(cum)};
}

/// K_H^{-1} f = cH^{-1} Gamma(a)^{-1} x^a I^{-a}_{0+}(y^{-a} f'), a = H - 1/2; needs f(0) = 0.
inline SampledFunction kh_inverse(const SampledFunction& f, const HurstParam& h) {
  double scale = 0.0;
  for (std::size_t i = 1; i < f.grid.size(); ++i) scale = std::max(scale, std::abs(f.at(i)));
  const double f0 = f.left_power > 0.0 ? 0.0 : f.at(0);
  if (std::abs(f0) > 1e-12 * std::max(scale, 1.0)) {
    throw std::invalid_argument("kh_inverse: f(0) must vanish");
  }
  const double a = h.H - 0.5;
  auto out = times_power(left_derivative(times_power(derivative(f), -a), a), a);
  return scaled(std::move(out), 1.0 / (h.cH * gamma_fn(a)));
}

/// Cell decomposition of the Rosenblatt kernel used for path construction.
///
/// With g(u, y) = sqrt(e_H) y^{-H/2} u^{H/2} (u - y)^{H/2-1}, the kernel is
/// int g(u, y1) g(u, y2) du. Let gbar_j(u) be the average of g(u, .) over cell j of a
/// refined partition. The cell-averaged kernel at t is sum over u-cells m below t of
/// E_m(j, k) = int_{cell m} gbar_j gbar_k du. For every u-cell the full quadratic form is
/// integrated with a short Gauss rule; pairs with k in the last `near_band` + 1 cells and
/// the diagonal get an exact correction from a graded rule.
///
/// The discrete double integral of increments x is the Wiener-Ito integral of the
/// averaged kernel, sum_{j,k} K(j, k) x_j x_k - sum_j K(j, j) |cell j|.
class RosenblattKernel {
 public:
  struct Options {
    std::size_t coarse_points = 3;
    std::size_t near_band = 3;
    std::size_t head_levels = 20;
  };

  RosenblattKernel(const HurstParam& h, const TimeGrid& grid) : RosenblattKernel(h, grid, Options{}) {}

  RosenblattKernel(const HurstParam& h, const TimeGrid& grid, Options opt)
      : h_{h}, part_{grid, opt.head_levels}, opt_{opt} {
    if (opt_.coarse_points == 0) {
      throw std::invalid_argument("RosenblattKernel: need at least one coarse point");
    }
    const JacobiRule gl = gauss_legendre(opt_.coarse_points);
    coarse_nodes_ = gl.nodes;
    coarse_weights_ = gl.weights;
    build_fine_rule();

    const std::size_t cells = part_.cells();
    coarse_.resize(cells);
    diag_corr_.resize(cells);
    near_.resize(cells);
    trace_cells_.resize(cells);
    parallel_for(cells, [&](std::size_t m) { build_cell(m); });
    trace_.assign(grid.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      for (std::size_t m = part_.node_index(i - 1); m < part_.node_index(i); ++m) acc += trace_cells_[m];
      trace_[i] = acc;
    }
  }

  [[nodiscard]] const TimeGrid& grid() const noexcept { return part_.grid; }
  [[nodiscard]] const RefinedPartition& partition() const noexcept { return part_; }
  [[nodiscard]] const HurstParam& hurst() const noexcept { return h_; }

  /// Averages of g(u, .) over partition cells 0..m for u in cell m (m + 1 values).
  void cell_factor(double u, std::size_t m, double* out) const {
    const double b = 0.5 * h_.H;
    const double pre = std::sqrt(h_.eH) * std::pow(u, b) * beta_fn(1.0 - b, b);
    // Regularised incomplete Beta at x_l = tau_l / u, kept with its complement for accuracy near 1.
    double prev_lo = 0.0;
    double prev_hi = 1.0;
    for (std::size_t j = 0; j <= m; ++j) {
      const double x = part_.nodes[j + 1] / u;
      double lo = 1.0;
      double hi = 0.0;
      if (x < 1.0) {
        if (x <= 0.5) {
          lo = boost::math::ibeta(1.0 - b, b, x);
          hi = 1.0 - lo;
        } else {
          hi = boost::math::ibetac(1.0 - b, b, x);
          lo = 1.0 - hi;
        }
      }
      const double diff = (x > 0.5) ? (prev_hi - hi) : (lo - prev_lo);
      out[j] = pre * diff / part_.width(j);
      prev_lo = lo;
      prev_hi = hi;
    }
  }

  /// sum_{j,k} Kbar_{t_i}(j, k) x_j x_k at every uniform node, for increments on the partition.
  [[nodiscard]] std::vector<double> quadratic_form(const std::vector<double>& x) const {
    check_size(x);
    const std::size_t n = grid().steps();
    std::vector<double> out(n + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t m = part_.node_index(i - 1); m < part_.node_index(i); ++m) {
        acc += cell_quadratic(m, x.data());
      }
      out[i] = acc;
    }
    return out;
  }

  /// sum_j Kbar_{t_i}(j, j) |cell j| at every uniform node.
  [[nodiscard]] const std::vector<double>& trace() const noexcept { return trace_; }

  /// Discrete double Wiener-Ito integral at every uniform node.
  [[nodiscard]] std::vector<double> double_integral(const std::vector<double>& x) const {
    auto out = quadratic_form(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= trace_[i];
    return out;
  }

  /// a_m(j) = int_{cell m} theta(u) gbar_j(u) du for j <= m, one row per partition cell.
  [[nodiscard]] std::vector<std::vector<double>> shift_moments(const SampledFunction& theta) const {
    require_same_grid(theta.grid, grid(), "RosenblattKernel::shift_moments");
    const std::size_t cells = part_.cells();
    std::vector<std::vector<double>> out(cells);
    parallel_for(cells, [&](std::size_t m) {
      std::vector<double> row(m + 1, 0.0);
      std::vector<double> f(m + 1);
      const double t0 = part_.nodes[m];
      const double w = part_.width(m);
      for (std::size_t p = 0; p < fine_nodes_.size(); ++p) {
        const double u = t0 + w * fine_nodes_[p];
        cell_factor(u, m, f.data());
        const double c = w * fine_weights_[p] * theta(u);
        for (std::size_t j = 0; j <= m; ++j) row[j] += c * f[j];
      }
      out[m] = std::move(row);
    });
    return out;
  }

  /// sum_{m below t_i} sum_j a_m(j) x_j at every uniform node.
  [[nodiscard]] std::vector<double> apply_shift(const std::vector<std::vector<double>>& moments,
                                                const std::vector<double>& x) const {
    check_size(x);
    const std::size_t n = grid().steps();
    std::vector<double> out(n + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t m = part_.node_index(i - 1); m < part_.node_index(i); ++m) {
        const auto& row = moments[m];
        for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
      }
      out[i] = acc;
    }
    return out;
  }

  /// Averaged kernel matrix over partition cells at uniform node i, as used by
  /// quadratic_form. O(cells^3); meant for checks.
  [[nodiscard]] Eigen::MatrixXd cell_kernel(std::size_t i) const {
    const auto cells = static_cast<Eigen::Index>(part_.cells());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(cells, cells);
    const std::size_t q_count = coarse_nodes_.size();
    for (std::size_t m = 0; m < part_.node_index(i); ++m) {
      const auto& G = coarse_[m];
      for (std::size_t q = 0; q < q_count; ++q) {
        const double* g = G.data() + q * (m + 1);
        for (std::size_t j = 0; j <= m; ++j) {
          for (std::size_t k = 0; k <= m; ++k) {
            K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) +=
                coarse_weights_[q] * g[j] * g[k];
          }
        }
      }
      const double* c = near_[m].data();
      for (std::size_t k = near_start(m); k <= m; ++k) {
        for (std::size_t j = 0; j < k; ++j, ++c) {
          K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) += *c;
          K(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) += *c;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += diag_corr_[m][j];
      }
    }
    return K;
  }

 private:
  void check_size(const std::vector<double>& x) const {
    if (x.size() != part_.cells()) {
      throw std::invalid_argument("RosenblattKernel: expected one increment per partition cell");
    }
  }

  [[nodiscard]] std::size_t near_start(std::size_t m) const noexcept {
    return m > opt_.near_band ? m - opt_.near_band : 0;
  }

  void build_fine_rule() {
    // Geometric grading toward the left end of the cell, where gbar_m and gbar_{m-1}
    // behave like (u - t_m)^{H/2}.
    const JacobiRule gl = gauss_legendre(6);
    const int levels = 8;
    std::vector<double> breaks{0.0};
    for (int l = levels; l >= 1; --l) breaks.push_back(std::pow(0.25, l));
    breaks.push_back(1.0);
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      const double lo = breaks[k];
      const double w = breaks[k + 1] - lo;
      for (std::size_t q = 0; q < gl.size(); ++q) {
        fine_nodes_.push_back(lo + w * gl.nodes[q]);
        fine_weights_.push_back(w * gl.weights[q]);
      }
    }
  }

  void build_cell(std::size_t m) {
    const std::size_t q_count = coarse_nodes_.size();
    const double t0 = part_.nodes[m];
    const double w = part_.width(m);
    std::vector<double> G(q_count * (m + 1));
    for (std::size_t q = 0; q < q_count; ++q) {
      cell_factor(t0 + w * coarse_nodes_[q], m, G.data() + q * (m + 1));
    }
    auto coarse_pair = [&](std::size_t j, std::size_t k) {
      double acc = 0.0;
      for (std::size_t q = 0; q < q_count; ++q) {
        const double* g = G.data() + q * (m + 1);
        acc += coarse_weights_[q] * g[j] * g[k];
      }
      return w * acc;
    };

    const std::size_t kmin = near_start(m);
    std::size_t count = 0;
    for (std::size_t k = kmin; k <= m; ++k) count += k;
    std::vector<double> corr(count, 0.0);
    std::vector<double> diag(m + 1, 0.0);
    std::vector<double> f(m + 1);
    for (std::size_t p = 0; p < fine_nodes_.size(); ++p) {
      cell_factor(t0 + w * fine_nodes_[p], m, f.data());
      const double fw = w * fine_weights_[p];
      for (std::size_t j = 0; j <= m; ++j) diag[j] += fw * f[j] * f[j];
      double* c = corr.data();
      for (std::size_t k = kmin; k <= m; ++k) {
        const double wk = fw * f[k];
        for (std::size_t j = 0; j < k; ++j, ++c) *c += wk * f[j];
      }
    }
    double trace = 0.0;
    for (std::size_t j = 0; j <= m; ++j) trace += diag[j] * part_.width(j);
    double* c = corr.data();
    for (std::size_t k = kmin; k <= m; ++k) {
      for (std::size_t j = 0; j < k; ++j, ++c) *c -= coarse_pair(j, k);
    }
    for (std::size_t j = 0; j <= m; ++j) diag[j] -= coarse_pair(j, j);
    for (double& v : G) v *= std::sqrt(w);
    coarse_[m] = std::move(G);
    diag_corr_[m] = std::move(diag);
    near_[m] = std::move(corr);
    trace_cells_[m] = trace;
  }

  /// sum_{j,k<=m} E_m(j, k) x_j x_k.
  double cell_quadratic(std::size_t m, const double* x) const {
    const std::size_t q_count = coarse_nodes_.size();
    const auto& G = coarse_[m];
    double acc = 0.0;
    for (std::size_t q = 0; q < q_count; ++q) {
      const double* g = G.data() + q * (m + 1);
      double s = 0.0;
      for (std::size_t j = 0; j <= m; ++j) s += g[j] * x[j];
      acc += coarse_weights_[q] * s * s;
    }
    const auto& D = diag_corr_[m];
    for (std::size_t j = 0; j <= m; ++j) acc += D[j] * x[j] * x[j];
    const double* c = near_[m].data();
    double cross = 0.0;
    for (std::size_t k = near_start(m); k <= m; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j, ++c) s += *c * x[j];
      cross += s * x[k];
    }
    return acc + 2.0 * cross;
  }

  HurstParam h_;
  RefinedPartition part_;
  Options opt_;
  std::vector<double> coarse_nodes_;
  std::vector<double> coarse_weights_;
  std::vector<double> fine_nodes_;    // on [0, 1]
  std::vector<double> fine_weights_;  // sum to 1
  std::vector<std::vector<double>> coarse_;     // per cell m: q-major sqrt(|m|) gbar values
  std::vector<std::vector<double>> diag_corr_;  // per cell m: exact - coarse E_m(j, j)
  std::vector<std::vector<double>> near_;       // per cell m: exact - coarse, near pairs
  std::vector<double> trace_cells_;
  std::vector<double> trace_;
};

}  // namespace rosenblatt

#endif
