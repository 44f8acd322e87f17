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

#ifndef ROSENBLATT_QUADRATURE_HPP
#define ROSENBLATT_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

/**
 * \file
 * \brief Special functions and Gauss-Jacobi rules for endpoint-singular integrands.
 */

namespace rosenblatt {

inline double gamma_fn(double x) { return boost::math::tgamma(x); }

/// Complete Beta function B(a, b), valid for any a, b where the Gamma ratio is defined
/// (negative non-integer arguments are handled by analytic continuation).
inline double beta_fn(double a, double b) {
  if (a > 0.0 && b > 0.0) {
    return boost::math::beta(a, b);
  }
  return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);
}

/// Non-normalized incomplete Beta B_x(a, b) = int_0^x s^{a-1} (1-s)^{b-1} ds, a, b > 0.
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return boost::math::beta(a, b);
  return boost::math::beta(a, b, x);
}

/// Complement int_x^1 s^{a-1} (1-s)^{b-1} ds, accurate when x is close to one.
inline double incomplete_beta_upper(double a, double b, double x) {
  if (x <= 0.0) return boost::math::beta(a, b);
  if (x >= 1.0) return 0.0;
  return boost::math::betac(a, b, x);
}

/// Nodes and weights on [0, 1] integrating s^left (1-s)^right p(s) exactly for
/// polynomials p of degree < 2 * size().
struct JacobiRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) acc += weights[q] * f(nodes[q]);
    return acc;
  }
};

/// Golub-Welsch construction for the weight s^left (1 - s)^right on [0, 1].
inline JacobiRule make_jacobi_rule(double left, double right, std::size_t points) {
  if (!(left > -1.0) || !(right > -1.0)) {
    throw std::invalid_argument("make_jacobi_rule: exponents must exceed -1");
  }
  if (points == 0) {
    throw std::invalid_argument("make_jacobi_rule: need at least one point");
  }
  // Standard Jacobi recurrence on [-1, 1] with weight (1-x)^a (1+x)^b.
  const double a = right;
  const double b = left;
  const auto n = static_cast<Eigen::Index>(points);
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    if (k == 0) {
      diag(k) = (b - a) / (a + b + 2.0);
    } else {
      diag(k) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    double v = 0.0;
    if (k == 1) {
      // (s - 1) = 1 + a + b cancels against the numerator factor k + a + b.
      v = 4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0));
    } else {
      v = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(v);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (n == 1) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = diag(0);
    solver.compute(m);
  } else {
    solver.computeFromTridiagonal(diag, sub);
  }
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("make_jacobi_rule: eigen decomposition failed");
  }
  // mu0 on [0, 1] directly: int s^left (1-s)^right ds.
  const double mu0 = beta_fn(left + 1.0, right + 1.0);
  JacobiRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = 0.5 * (1.0 + solver.eigenvalues()(k));
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  return rule;
}

/// Per-call memo of Jacobi rules; not shared between threads.
class RuleCache {
 public:
  const JacobiRule& get(double left, double right, std::size_t points) {
    const auto key = std::make_tuple(left, right, points);
    auto it = rules_.find(key);
    if (it == rules_.end()) {
      it = rules_.emplace(key, make_jacobi_rule(left, right, points)).first;
    }
    return it->second;
  }

 private:
  std::map<std::tuple<double, double, std::size_t>, JacobiRule> rules_;
};

/// Gauss-Legendre rule on [0, 1].
inline JacobiRule gauss_legendre(std::size_t points) { return make_jacobi_rule(0.0, 0.0, points); }

}  // namespace rosenblatt

#endif
