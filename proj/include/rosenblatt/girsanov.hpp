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

#ifndef ROSENBLATT_GIRSANOV_HPP
#define ROSENBLATT_GIRSANOV_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "frac_calc.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "simulate.hpp"

/**
 * \file
 * \brief Change of measure for the Rosenblatt process: shifts, densities and the two
 * constructions of the shifted process.
 */

namespace rosenblatt {

/// Deterministic shift theta of the Rosenblatt process and the matching Wiener drift phi,
///   theta = cHalf Gamma(H/2) u^{H/2} I^{H/2}_{0+}(y^{-H/2} phi).
/// Step-mode theta yields a step-mode phi holding exact cell averages.
struct ShiftSpec {
  SampledFunction theta;
  SampledFunction phi;
  std::string description;
};

/// Raised when the theta -> phi -> theta roundtrip misses at the working resolution.
class InadmissibleShift : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline SampledFunction theta_from_phi(const SampledFunction& phi, const HurstParam& h) {
  const double b = 0.5 * h.H;
  return scaled(weighted_frac_op(phi, b, Direction::forward), h.cHalf * gamma_fn(b));
}

namespace detail {

/// Cell averages of phi for a step theta. With J = I^{1-b}_{0+}(y^{-b} theta) and
/// phi = C u^b J', the primitive is int_0^t phi = C [t^b J(t) - b int_0^t u^{b-1} J].
inline SampledFunction phi_from_step_theta(const SampledFunction& theta, const HurstParam& h) {
  const double b = 0.5 * h.H;
  const double C = 1.0 / (h.cHalf * gamma_fn(b));
  const TimeGrid& grid = theta.grid;
  const auto J = left_integral(times_power(theta, -b), 1.0 - b);
  const auto tail = cumulative_integral(times_power(J, b - 1.0));
  std::vector<double> Phi(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    Phi[i] = C * (std::pow(grid.node(i), b) * J.at(i) - b * tail[i]);
  }
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.steps(); ++j) v[j] = (Phi[j + 1] - Phi[j]) / grid.step();
  v.back() = v[grid.steps() - 1];
  return SampledFunction{grid, std::move(v), 0.0, 0.0, Interp::step};
}

/// Relative L2 distance of cell averages.
inline double relative_gap(const SampledFunction& f, const SampledFunction& g) {
  const auto a = cell_averages(f);
  const auto c = cell_averages(g);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += (a[j] - c[j]) * (a[j] - c[j]);
    den += c[j] * c[j];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace detail

/// phi = cHalf^{-1} Gamma(H/2)^{-1} u^{H/2} I^{-H/2}_{0+}(y^{-H/2} theta). Throws
/// InadmissibleShift when theta_from_phi(phi) misses theta by more than `tolerance`
/// (relative L2 of cell averages); a negative tolerance selects n^{-H/2}.
inline ShiftSpec phi_from_theta(const SampledFunction& theta, const HurstParam& h, std::string description = {},
                                double tolerance = -1.0) {
  const double b = 0.5 * h.H;
  if (tolerance < 0.0) tolerance = std::pow(static_cast<double>(theta.grid.steps()), -b);
  SampledFunction phi = theta.interp == Interp::step
                            ? detail::phi_from_step_theta(theta, h)
                            : scaled(weighted_frac_op(theta, b, Direction::inverse), 1.0 / (h.cHalf * gamma_fn(b)));
  for (std::size_t i = 1; i + 1 < phi.values.size(); ++i) {
    if (!std::isfinite(phi.values[i])) {
      throw InadmissibleShift("phi_from_theta: phi is not finite at node " + std::to_string(i));
    }
  }
  const double gap = detail::relative_gap(theta_from_phi(phi, h), theta);
  if (!(gap <= tolerance)) {
    throw InadmissibleShift("phi_from_theta: roundtrip error " + std::to_string(gap) +
                            " exceeds tolerance; shift is not admissible at this resolution");
  }
  return ShiftSpec{theta, std::move(phi), std::move(description)};
}

/// theta(u) = cHalf B(H/2, 1 + alpha - H/2) u^{alpha + H/2}, whose Wiener drift is u^alpha.
inline SampledFunction power_theta(const TimeGrid& grid, const HurstParam& h, double alpha) {
  if (!(alpha > -0.5)) {
    throw std::invalid_argument("power shift: alpha must exceed -1/2");
  }
  const double b = 0.5 * h.H;
  return power_function(grid, alpha + b, h.cHalf * beta_fn(b, 1.0 + alpha - b));
}

/// theta^A = 1_A - 1_{[0,T] \ A}.
inline SampledFunction indicator_theta(const TimeGrid& grid, const std::vector<std::pair<double, double>>& A) {
  return indicator(grid, A, 1.0, -1.0);
}

/// Parses "none", "power:ALPHA", "indicator:a,b;c,d" or "table:PATH" (CSV rows t,theta,
/// linearly interpolated). Throws std::invalid_argument on malformed input.
inline SampledFunction parse_shift(const std::string& text, const TimeGrid& grid, const HurstParam& h) {
  auto number = [&](const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (s.empty() || end != begin + s.size() || !std::isfinite(v)) {
      throw std::invalid_argument("malformed number '" + s + "' in shift spec '" + text + "'");
    }
    return v;
  };
  if (text == "none") return constant(grid, 0.0);
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("unknown shift spec '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "power") return power_theta(grid, h, number(arg));
  if (kind == "indicator") {
    std::vector<std::pair<double, double>> A;
    std::stringstream ss{arg};
    std::string piece;
    while (std::getline(ss, piece, ';')) {
      const auto comma = piece.find(',');
      if (comma == std::string::npos) {
        throw std::invalid_argument("indicator interval '" + piece + "' must be a,b");
      }
      const double lo = number(piece.substr(0, comma));
      const double hi = number(piece.substr(comma + 1));
      if (!(0.0 <= lo && lo < hi && hi <= grid.horizon())) {
        throw std::invalid_argument("indicator interval '" + piece + "' must satisfy 0 <= a < b <= T");
      }
      A.emplace_back(lo, hi);
    }
    if (A.empty()) throw std::invalid_argument("indicator shift needs at least one interval");
    return indicator_theta(grid, A);
  }
  if (kind == "table") {
    std::ifstream in{arg};
    if (!in) throw std::invalid_argument("cannot open shift table '" + arg + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("shift table row '" + line + "' must be t,theta");
      const std::string t = line.substr(0, comma);
      if (rows.empty() && t == "t") continue;  // header
      rows.emplace_back(number(t), number(line.substr(comma + 1)));
    }
    if (rows.size() < 2) throw std::invalid_argument("shift table needs at least two rows");
    if (!std::is_sorted(rows.begin(), rows.end())) throw std::invalid_argument("shift table must be sorted by t");
    if (rows.front().first > 0.0 || rows.back().first < grid.horizon()) {
      throw std::invalid_argument("shift table must cover [0, T]");
    }
    return sample(grid, [&](double t) {
      auto it = std::lower_bound(rows.begin(), rows.end(), std::pair{t, -std::numeric_limits<double>::infinity()});
      if (it == rows.begin()) return it->second;
      const auto& [t1, v1] = *it;
      const auto& [t0, v0] = *(it - 1);
      return t1 == t0 ? v1 : v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    });
  }
  throw std::invalid_argument("unknown shift kind '" + kind + "'");
}

/// Everything a shift needs on one model, computed once and shared by all paths.
struct ShiftPlan {
  ShiftSpec spec;
  std::vector<double> phibar;                 ///< phi averaged over partition cells
  std::vector<std::vector<double>> moments;   ///< int_{cell m} theta gbar_j du
  std::vector<double> drift;                  ///< d_H int_0^t theta^2 at every node
  std::vector<double> theta_integral;         ///< int_0^t theta at every node
  std::vector<double> tilde_drift;            ///< deterministic part of the tilde construction
};

inline std::vector<double> phi_partition_averages(const ShiftSpec& s, const RefinedPartition& part) {
  std::vector<double> out(part.cells());
  if (s.phi.interp == Interp::step) {
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = s.phi.values[part.uniform_cell(c)];
    return out;
  }
  const auto cells = partition_cell_integrals(s.phi, part);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = cells[c] / part.width(c);
  return out;
}

inline ShiftPlan make_plan(const Model& m, ShiftSpec spec) {
  require_same_grid(spec.theta.grid, m.grid, "make_plan");
  ShiftPlan p{std::move(spec), {}, {}, {}, {}, {}};
  p.phibar = phi_partition_averages(p.spec, m.engine.partition());
  p.moments = m.engine.shift_moments(p.spec.theta);
  p.drift = cumulative_integral(p.spec.theta, &p.spec.theta);
  for (double& v : p.drift) v *= m.h.dH;
  p.theta_integral = cumulative_integral(p.spec.theta);
  std::vector<double> x(p.phibar.size());
  for (std::size_t c = 0; c < x.size(); ++c) x[c] = p.phibar[c] * m.engine.partition().width(c);
  p.tilde_drift = m.engine.quadratic_form(x);
  return p;
}

/// log Z at every node; Z itself is formed on demand.
struct GirsanovDensity {
  std::vector<double> logZ;
  [[nodiscard]] double Z_T() const { return std::exp(logZ.back()); }
};

/// log Z_t = -sum phi_c dB_c - 1/2 sum phi_c^2 |c| over partition cells below t.
inline GirsanovDensity log_density(const ShiftPlan& p, const WienerIncrements& w) {
  const RefinedPartition part{w.grid, w.head_levels()};
  if (p.phibar.size() != part.cells()) {
    throw std::invalid_argument("log_density: shift plan and increments use different partitions");
  }
  const auto x = w.partition_increments();
  GirsanovDensity d{std::vector<double>(w.grid.size(), 0.0)};
  double acc = 0.0;
  for (std::size_t i = 1; i < w.grid.size(); ++i) {
    for (std::size_t c = part.node_index(i - 1); c < part.node_index(i); ++c) {
      const double f = p.phibar[c];
      acc -= f * x[c] + 0.5 * f * f * part.width(c);
    }
    d.logZ[i] = acc;
  }
  return d;
}

/// 1/2 int phi^2 as used by the density; finite means Novikov's condition holds.
inline double novikov_exponent(const ShiftPlan& p, const RefinedPartition& part) {
  double acc = 0.0;
  for (std::size_t c = 0; c < p.phibar.size(); ++c) acc += 0.5 * p.phibar[c] * p.phibar[c] * part.width(c);
  return acc;
}

inline bool novikov_holds(const ShiftPlan& p, const RefinedPartition& part) {
  return std::isfinite(std::exp(novikov_exponent(p, part)));
}

/// 2 d_H int_0^t theta dB^{H/2+1/2} at every node, driven by partition increments x.
inline std::vector<double> stochastic_shift(const Model& m, const ShiftPlan& p, const std::vector<double>& x) {
  auto out = m.engine.apply_shift(p.moments, x);
  const double c = 2.0 * std::sqrt(m.h.dH);
  for (double& v : out) v *= c;
  return out;
}

/// R^H + 2 d_H int theta dB^{H/2+1/2} + d_H int theta^2.
inline std::vector<double> shifted_rosenblatt_direct(const Model& m, const PathBundle& b, const ShiftPlan& p) {
  require_same_grid(b.w.grid, m.grid, "shifted_rosenblatt_direct");
  auto out = stochastic_shift(m, p, b.w.partition_increments());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.rosenblatt[i] + p.drift[i];
  return out;
}

/// Double integral of the shifted increments dB + phi du.
inline std::vector<double> shifted_rosenblatt_via_tilde(const Model& m, const WienerIncrements& w, const ShiftPlan& p) {
  require_same_grid(w.grid, m.grid, "shifted_rosenblatt_via_tilde");
  auto x = w.partition_increments();
  const auto& part = m.engine.partition();
  for (std::size_t c = 0; c < x.size(); ++c) x[c] += p.phibar[c] * part.width(c);
  return m.engine.double_integral(x);
}

/// Fills the shifted fields of a bundle.
inline void apply_shift(const Model& m, PathBundle& b, const ShiftPlan& p) {
  b.shifted_direct = shifted_rosenblatt_direct(m, b, p);
  b.shifted_tilde = shifted_rosenblatt_via_tilde(m, b.w, p);
  b.log_density = log_density(p, b.w).logZ;
}

/// max_t |R_t - (Rtilde_t - 2 d_H int theta dBtilde^{H/2+1/2} + d_H int theta^2)| with Rtilde
/// from the tilde construction and Btilde^{H/2+1/2} driven by the shifted increments.
inline double inverse_shift_identity(const Model& m, const PathBundle& b, const ShiftPlan& p) {
  const auto tilde = b.shifted_tilde.empty() ? shifted_rosenblatt_via_tilde(m, b.w, p) : b.shifted_tilde;
  auto x = b.w.partition_increments();
  const auto& part = m.engine.partition();
  for (std::size_t c = 0; c < x.size(); ++c) x[c] += p.phibar[c] * part.width(c);
  const auto stoch = stochastic_shift(m, p, x);
  double worst = 0.0;
  for (std::size_t i = 0; i < tilde.size(); ++i) {
    worst = std::max(worst, std::abs(b.rosenblatt[i] - (tilde[i] - stoch[i] + p.drift[i])));
  }
  return worst;
}

/// Raised by drift_removal when b^2 - 4 d_H a < 0 somewhere.
class NotReducible : public std::runtime_error {
 public:
  NotReducible(std::size_t node, double t, double D)
      : std::runtime_error("model not reducible: D = " + std::to_string(D) + " < 0 at node " +
                           std::to_string(node) + " (t = " + std::to_string(t) + ")"),
        node_{node},
        t_{t},
        D_{D} {}
  [[nodiscard]] std::size_t node() const noexcept { return node_; }
  [[nodiscard]] double time() const noexcept { return t_; }
  [[nodiscard]] double discriminant() const noexcept { return D_; }

 private:
  std::size_t node_;
  double t_;
  double D_;
};

struct DriftRemoval {
  SampledFunction theta;
  std::vector<double> D;  ///< b^2 - 4 d_H a at every node
  bool full = false;      ///< D == 0 everywhere: X is the shifted Rosenblatt process itself
  int sign = 1;
};

/// theta = (b + sign sqrt(D)) / (2 d_H) for X = int a + int b dB^{H/2+1/2} + R^H.
/// Values of D within `zero_tol` of 0 count as 0.
inline DriftRemoval drift_removal(const SampledFunction& a, const SampledFunction& b, const HurstParam& h, int sign,
                                  double zero_tol = 1e-12) {
  require_same_grid(a.grid, b.grid, "drift_removal");
  if (sign != 1 && sign != -1) throw std::invalid_argument("drift_removal: sign must be +1 or -1");
  const TimeGrid& grid = a.grid;
  std::vector<double> D(grid.size());
  std::vector<double> theta(grid.size());
  bool full = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ai = a.at(i);
    const double bi = b.at(i);
    double d = bi * bi - 4.0 * h.dH * ai;
    const double scale = std::max({1.0, bi * bi, std::abs(4.0 * h.dH * ai)});
    if (std::abs(d) <= zero_tol * scale) d = 0.0;
    if (d < 0.0) throw NotReducible(i, grid.node(i), d);
    if (d > 0.0) full = false;
    D[i] = d;
    theta[i] = (bi + sign * std::sqrt(d)) / (2.0 * h.dH);
  }
  return DriftRemoval{SampledFunction{grid, std::move(theta)}, std::move(D), full, sign};
}

/// Pathwise check of a drift removal. X = int a + int b dB^{H/2+1/2} + R^H is built from dB;
/// its reduced form -+int D^{1/2} dBtilde^{H/2+1/2} + Rtilde from the shifted increments
/// dB + phi du. Setup is shared across paths.
class ReductionCheck {
 public:
  ReductionCheck(const Model& m, const SampledFunction& a, const SampledFunction& b, const DriftRemoval& r)
      : m_{&m},
        plan_{make_plan(m, phi_from_theta(r.theta, m.h, "drift removal"))},
        a_int_{cumulative_integral(a)},
        b_moments_{m.engine.shift_moments(b)},
        sign_{r.sign} {
    require_same_grid(a.grid, m.grid, "ReductionCheck");
    std::vector<double> root(r.D.size());
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = std::sqrt(r.D[i]);
    root_moments_ = m.engine.shift_moments(SampledFunction{m.grid, std::move(root)});
  }

  /// max |X - reduced| / max |X| on one path.
  [[nodiscard]] double residual(const WienerIncrements& w) const {
    const auto& engine = m_->engine;
    const auto x = w.partition_increments();
    const auto R = rosenblatt_path(w, engine);
    const double inv = 1.0 / std::sqrt(m_->h.dH);
    const auto Bint = engine.apply_shift(b_moments_, x);
    auto xt = x;
    const auto& part = engine.partition();
    for (std::size_t c = 0; c < xt.size(); ++c) xt[c] += plan_.phibar[c] * part.width(c);
    const auto Dint = engine.apply_shift(root_moments_, xt);
    const auto tilde = engine.double_integral(xt);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) {
      const double X = a_int_[i] + inv * Bint[i] + R[i];
      const double Y = -sign_ * inv * Dint[i] + tilde[i];
      worst = std::max(worst, std::abs(X - Y));
      scale = std::max(scale, std::abs(X));
    }
    return scale > 0.0 ? worst / scale : worst;
  }

 private:
  const Model* m_;
  ShiftPlan plan_;
  std::vector<double> a_int_;
  std::vector<std::vector<double>> b_moments_;
  std::vector<std::vector<double>> root_moments_;
  int sign_;
};

inline double reduction_residual(const Model& m, const WienerIncrements& w, const SampledFunction& a,
                                 const SampledFunction& b, const DriftRemoval& r) {
  return ReductionCheck{m, a, b, r}.residual(w);
}

}  // namespace rosenblatt

#endif
