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

#ifndef ROSENBLATT_SIMULATE_HPP
#define ROSENBLATT_SIMULATE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "frac_calc.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

/**
 * \file
 * \brief Wiener increments and the paths built from them: fractional Brownian motion,
 * the Rosenblatt process, Wiener integrals against FBM and recovery of the Wiener path.
 */

namespace rosenblatt {

/// Default number of dyadic sub-cells refining [0, Delta].
inline constexpr std::size_t kDefaultHeadLevels = 20;

/// Increments of a standard Wiener process on the uniform cells, plus a Brownian-bridge
/// refinement of the first cell. The refinement never alters dB.
struct WienerIncrements {
  TimeGrid grid;
  std::vector<double> dB;    ///< one per uniform cell
  std::vector<double> head;  ///< sub-cells of [0, Delta]; sums to dB[0]
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;

  [[nodiscard]] std::size_t head_levels() const noexcept { return head.size() - 1; }

  /// Increments over the cells of RefinedPartition{grid, head_levels()}.
  [[nodiscard]] std::vector<double> partition_increments() const {
    std::vector<double> out(head);
    out.insert(out.end(), dB.begin() + 1, dB.end());
    return out;
  }

  /// B at every node.
  [[nodiscard]] std::vector<double> path() const {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t j = 0; j < dB.size(); ++j) out[j + 1] = out[j] + dB[j];
    return out;
  }
};

namespace detail {
inline constexpr std::uint32_t kIncrementStream = 0;
inline constexpr std::uint32_t kBridgeStream = 1;
}  // namespace detail

inline WienerIncrements gen_increments(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index,
                                       std::size_t head_levels = kDefaultHeadLevels) {
  WienerIncrements w{grid, std::vector<double>(grid.steps()), {}, seed, path_index};
  const NormalStream main{seed, path_index, detail::kIncrementStream};
  const double sd = std::sqrt(grid.step());
  for (std::size_t j = 0; j < w.dB.size(); ++j) w.dB[j] = sd * main(static_cast<std::uint32_t>(j));

  // W(s/2) given W(s) is N(W(s)/2, s/4); walk down from s = Delta.
  const RefinedPartition part{grid, head_levels};
  const NormalStream bridge{seed, path_index, detail::kBridgeStream};
  std::vector<double> W(head_levels + 2, 0.0);  // W at partition nodes 0..head_levels+1
  W[head_levels + 1] = w.dB[0];
  for (std::size_t k = head_levels; k >= 1; --k) {
    const double s = part.nodes[k + 1];
    W[k] = 0.5 * W[k + 1] + 0.5 * std::sqrt(s) * bridge(static_cast<std::uint32_t>(head_levels - k));
  }
  w.head.resize(head_levels + 1);
  for (std::size_t c = 0; c <= head_levels; ++c) w.head[c] = W[c + 1] - W[c];
  return w;
}

/// B^H_{t_i} = sum_{j<i} Kbar(t_i, j) dB_j.
inline std::vector<double> fbm_path(const WienerIncrements& w, const KernelMatrix& km) {
  require_same_grid(w.grid, km.grid, "fbm_path");
  const std::size_t n = w.grid.steps();
  const Eigen::Map<const Eigen::VectorXd> dB{w.dB.data(), static_cast<Eigen::Index>(n)};
  const Eigen::VectorXd out = km.entries * dB;
  return {out.data(), out.data() + out.size()};
}

/// R^H at every node from the partition increments of w.
inline std::vector<double> rosenblatt_path(const WienerIncrements& w, const RosenblattKernel& engine) {
  require_same_grid(w.grid, engine.grid(), "rosenblatt_path");
  if (w.head_levels() != engine.partition().head_levels) {
    throw std::invalid_argument("rosenblatt_path: increments and kernel use different head refinements");
  }
  return engine.double_integral(w.partition_increments());
}

/// Convenience overload that builds the kernel for a single path.
inline std::vector<double> rosenblatt_path(const WienerIncrements& w, const HurstParam& h) {
  const RosenblattKernel engine{h, w.grid, {3, 3, w.head_levels()}};
  return rosenblatt_path(w, engine);
}

/// int_0^T f dB^H = sum_j (d1 K* f)_j dB_j with cell averages of the adjoint image.
inline double wiener_integral_fbm(const SampledFunction& f, const WienerIncrements& w, const HurstParam& h) {
  require_same_grid(f.grid, w.grid, "wiener_integral_fbm");
  const auto psi = cell_averages(adjoint_op(f, h));
  double acc = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (!std::isfinite(psi[j])) {
      throw std::domain_error("wiener_integral_fbm: adjoint image is not finite on cell " + std::to_string(j));
    }
    acc += psi[j] * w.dB[j];
  }
  return acc;
}

namespace detail {

/// Primitive of the kernel that turns FBM increments back into Wiener increments.
/// For t > 0, ((d1 K*)^{-1} 1_(0,t))(s) = t^{-a} G(s/t) with a = H - 1/2 and
///   G(v) = C / Gamma(1-a) v^{-a} [(1-v)^{-a} - a L(v)],  L(v) = int_v^1 (1-r)^{-a} r^{-1} dr,
/// C = 1 / (cH Gamma(a)). prim(sigma) = int_0^sigma G.
class RecoveryPrimitive {
 public:
  explicit RecoveryPrimitive(const HurstParam& h)
      : a_{h.H - 0.5},
        scale_{1.0 / (h.cH * gamma_fn(a_) * gamma_fn(1.0 - a_))},
        rule_{make_jacobi_rule(0.0, -a_, 20)} {
    l_half_ = upper(0.5);
  }

  [[nodiscard]] double L(double sigma) const {
    if (sigma >= 1.0) return 0.0;
    if (sigma > 0.5) return upper(sigma);
    double acc = l_half_ + std::log(0.5 / sigma);
    double d = 1.0;
    for (int m = 1; m < 200; ++m) {
      d *= (a_ + m - 1.0) / m;
      const double term = d * (std::pow(0.5, m) - std::pow(sigma, m)) / m;
      acc += term;
      if (d * std::pow(0.5, m) < 1e-18) break;
    }
    return acc;
  }

  [[nodiscard]] double prim(double sigma) const {
    if (sigma <= 0.0) return 0.0;
    const double s = std::min(sigma, 1.0);
    const double b = incomplete_beta(1.0 - a_, 1.0 - a_, s);
    return scale_ * ((1.0 - 2.0 * a_) / (1.0 - a_) * b - a_ / (1.0 - a_) * std::pow(s, 1.0 - a_) * L(s));
  }

 private:
  [[nodiscard]] double upper(double sigma) const {
    const double w = 1.0 - sigma;
    const double acc = rule_.integrate([&](double s) { return 1.0 / (sigma + w * s); });
    return std::pow(w, 1.0 - a_) * acc;
  }

  double a_;
  double scale_;
  JacobiRule rule_;
  double l_half_ = 0.0;
};

}  // namespace detail

/// Weights W(k, j) with B_{t_k} ~ sum_j W(k, j) (B^H_{t_{j+1}} - B^H_{t_j}): cell averages of
/// (d1 K*)^{-1} 1_(0,t_k). Zero for j >= k.
inline Eigen::MatrixXd recovery_weights(const HurstParam& h, const TimeGrid& grid) {
  const std::size_t n = grid.steps();
  const double a = h.H - 0.5;
  const detail::RecoveryPrimitive prim{h};
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t r) {
    const std::size_t k = r + 1;
    const double scale = static_cast<double>(k) * std::pow(grid.node(k), -a);
    double prev = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double next = prim.prim(static_cast<double>(j + 1) / static_cast<double>(k));
      W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = scale * (next - prev);
      prev = next;
    }
  });
  return W;
}

/// Wiener path recovered from an FBM path on the grid.
inline std::vector<double> recover_wiener(const std::vector<double>& fbm, const Eigen::MatrixXd& weights) {
  const auto n = weights.cols();
  if (static_cast<Eigen::Index>(fbm.size()) != n + 1) {
    throw std::invalid_argument("recover_wiener: path length does not match the weights");
  }
  Eigen::VectorXd dx(n);
  for (Eigen::Index j = 0; j < n; ++j) dx(j) = fbm[static_cast<std::size_t>(j + 1)] - fbm[static_cast<std::size_t>(j)];
  const Eigen::VectorXd out = weights * dx;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out(i))) {
      throw std::domain_error("recover_wiener: non-finite value at node " + std::to_string(i));
    }
  }
  return {out.data(), out.data() + out.size()};
}

inline std::vector<double> recover_wiener(const std::vector<double>& fbm, const HurstParam& h, const TimeGrid& grid) {
  return recover_wiener(fbm, recovery_weights(h, grid));
}

/// Precomputed operators for one (H, grid): the FBM kernel for H/2 + 1/2 and the
/// Rosenblatt kernel for H.
struct Model {
  HurstParam h;
  HurstParam h_fbm;
  TimeGrid grid;
  KernelMatrix km;
  RosenblattKernel engine;

  Model(double H, const TimeGrid& g, std::size_t head_levels = kDefaultHeadLevels)
      : h{make_hurst(H)},
        h_fbm{make_hurst(0.5 * H + 0.5)},
        grid{g},
        km{volterra_kernel(h_fbm, g)},
        engine{h, g, {3, 3, head_levels}} {}

  [[nodiscard]] std::size_t head_levels() const noexcept { return engine.partition().head_levels; }
};

/// Paths generated from one set of Wiener increments. The shifted fields are filled by
/// the girsanov module and stay empty otherwise.
struct PathBundle {
  WienerIncrements w;
  std::vector<double> brownian;
  std::vector<double> fbm;         ///< B^{H/2+1/2}
  std::vector<double> rosenblatt;  ///< R^H
  std::vector<double> shifted_direct;
  std::vector<double> shifted_tilde;
  std::vector<double> log_density;
};

inline PathBundle make_bundle(const Model& m, std::uint64_t seed, std::uint64_t path_index) {
  PathBundle b{gen_increments(m.grid, seed, path_index, m.head_levels()), {}, {}, {}, {}, {}, {}};
  b.brownian = b.w.path();
  b.fbm = fbm_path(b.w, m.km);
  b.rosenblatt = rosenblatt_path(b.w, m.engine);
  return b;
}

/// CSV rows path_index,t,B,B_fbm,R for every node (no header).
inline void write_path_rows(std::ostream& os, const PathBundle& b) {
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < b.w.grid.size(); ++i) {
    os << b.w.path_index << ',' << b.w.grid.node(i) << ',' << b.brownian[i] << ',' << b.fbm[i] << ','
       << b.rosenblatt[i] << '\n';
  }
  os.precision(old);
}

inline constexpr const char* kPathsHeader = "path_index,t,B,B_fbm,R";

}  // namespace rosenblatt

#endif
