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

#ifndef ROSENBLATT_VERIFY_HPP
#define ROSENBLATT_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <boost/math/distributions/normal.hpp>

#include "girsanov.hpp"
#include "simulate.hpp"

/**
 * \file
 * \brief Importance-sampling check that the shifted process, reweighted by Z_T, has the
 * law of the unshifted Rosenblatt process.
 */

namespace rosenblatt {

/// Effective sample size (sum w)^2 / sum w^2.
inline double ess(const std::vector<double>& w) {
  if (w.empty()) throw std::invalid_argument("ess: no weights");
  double s = 0.0;
  double s2 = 0.0;
  for (double v : w) {
    s += v;
    s2 += v * v;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Self-normalised estimate sum w f(x) / sum w with its delta-method standard error.
inline Estimate weighted_moment(const std::vector<double>& x, const std::vector<double>& w,
                                const std::function<double(double)>& f) {
  if (x.size() != w.size()) throw std::invalid_argument("weighted_moment: length mismatch");
  double sw = 0.0;
  double swf = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] < 0.0) throw std::invalid_argument("weighted_moment: negative weight");
    sw += w[i];
    swf += w[i] * f(x[i]);
  }
  if (!(sw > 0.0)) throw std::invalid_argument("weighted_moment: zero total weight");
  const double est = swf / sw;
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = w[i] * (f(x[i]) - est);
    v += d * d;
  }
  return {est, std::sqrt(v) / sw};
}

struct CovarianceVerdict {
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> entry_pass;
  bool pass = true;
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
  double worst_score = 0.0;  ///< |difference| / combined SE at the worst entry
};

/// Entry passes iff |A - B| <= k sqrt(seA^2 + seB^2); the boundary counts as a pass.
inline CovarianceVerdict covariance_compare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& seA,
                                            const Eigen::MatrixXd& B, const Eigen::MatrixXd& seB, double k) {
  if (A.rows() != B.rows() || A.cols() != B.cols() || seA.rows() != A.rows() || seA.cols() != A.cols() ||
      seB.rows() != B.rows() || seB.cols() != B.cols()) {
    throw std::invalid_argument("covariance_compare: dimension mismatch");
  }
  CovarianceVerdict v;
  v.entry_pass.resize(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const double diff = std::abs(A(i, j) - B(i, j));
      const double se = std::hypot(seA(i, j), seB(i, j));
      const bool ok = diff <= k * se;
      v.entry_pass(i, j) = ok;
      v.pass = v.pass && ok;
      const double score = se > 0.0 ? diff / se : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (score > v.worst_score) {
        v.worst_score = score;
        v.worst_row = i;
        v.worst_col = j;
      }
    }
  }
  return v;
}

/// Two-sided threshold keeping the family-wise level of a single k-sigma test over m tests.
inline double bonferroni_k(double k, std::size_t m) {
  if (m <= 1) return k;
  const boost::math::normal nd;
  const double alpha = 2.0 * boost::math::cdf(boost::math::complement(nd, k));
  return boost::math::quantile(boost::math::complement(nd, alpha / (2.0 * static_cast<double>(m))));
}

struct McConfig {
  double H = 0.7;
  double T = 1.0;
  std::size_t n = 256;
  std::size_t N = 20000;
  std::uint64_t seed = 1;
  std::string shift = "power:0";
  std::vector<double> checkpoints;  ///< times in (0, T]; empty selects T/4, T/2, 3T/4, T
  std::vector<double> lambdas{0.5, 1.0};
  double k = 3.0;
  bool bonferroni = true;
  std::size_t head_levels = kDefaultHeadLevels;

  void validate() const {
    if (N < 100) throw std::invalid_argument("McConfig: N must be at least 100");
    if (!(k > 0.0)) throw std::invalid_argument("McConfig: k must be positive");
    for (double t : checkpoints) {
      if (!(t > 0.0 && t <= T)) throw std::invalid_argument("McConfig: checkpoint outside (0, T]");
    }
  }
};

struct Statistic {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double oracle = 0.0;
  double oracle_se = 0.0;
  bool pass = false;
};

struct McReport {
  McConfig config;
  std::vector<double> times;  ///< checkpoint times actually used (snapped to nodes)
  double meanZ = 0.0;
  double meanZ_se = 0.0;
  double ess = 0.0;
  double k_effective = 0.0;
  bool degenerate = false;
  std::vector<Statistic> stats;        ///< weighted shifted process vs oracle
  std::vector<Statistic> sensitivity;  ///< unweighted shifted process vs oracle
  Eigen::MatrixXd cov, cov_se, oracle_cov, oracle_cov_se;
  CovarianceVerdict cov_verdict;
  bool pass = false;                  ///< every statistic passes and weights are usable
  bool sensitivity_detected = false;  ///< some unweighted statistic fails
};

namespace detail {

/// Mean, covariance and exponential-moment statistics of checkpoint samples.
struct Moments {
  std::vector<Estimate> mean;
  Eigen::MatrixXd cov;
  Eigen::MatrixXd cov_se;
  std::vector<std::vector<Estimate>> expo;  // [lambda][checkpoint]
};

inline Moments moments(const std::vector<std::vector<double>>& x, const std::vector<double>& w,
                       const std::vector<double>& lambdas) {
  const std::size_t c = x.size();
  Moments m;
  for (std::size_t a = 0; a < c; ++a) m.mean.push_back(weighted_moment(x[a], w, [](double v) { return v; }));
  m.cov.resize(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
  m.cov_se.resizeLike(m.cov);
  std::vector<double> prod(w.size());
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = a; b < c; ++b) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        prod[i] = (x[a][i] - m.mean[a].value) * (x[b][i] - m.mean[b].value);
      }
      const auto e = weighted_moment(prod, w, [](double v) { return v; });
      const auto ia = static_cast<Eigen::Index>(a);
      const auto ib = static_cast<Eigen::Index>(b);
      m.cov(ia, ib) = m.cov(ib, ia) = e.value;
      m.cov_se(ia, ib) = m.cov_se(ib, ia) = e.se;
    }
  }
  for (double lam : lambdas) {
    std::vector<Estimate> row;
    for (std::size_t a = 0; a < c; ++a) {
      row.push_back(weighted_moment(x[a], w, [lam](double v) { return std::exp(-lam * v); }));
    }
    m.expo.push_back(std::move(row));
  }
  return m;
}

inline std::vector<Statistic> compare(const Moments& got, const Moments& want, const std::vector<double>& times,
                                      const std::vector<double>& lambdas, double k) {
  std::vector<Statistic> out;
  auto add = [&](std::string name, Estimate a, Estimate b) {
    const bool ok = std::abs(a.value - b.value) <= k * std::hypot(a.se, b.se);
    out.push_back({std::move(name), a.value, a.se, b.value, b.se, ok});
  };
  auto tag = [](double t) {
    std::ostringstream os;
    os << std::setprecision(6) << t;
    return os.str();
  };
  for (std::size_t a = 0; a < times.size(); ++a) add("mean@" + tag(times[a]), got.mean[a], want.mean[a]);
  for (std::size_t a = 0; a < times.size(); ++a) {
    for (std::size_t b = a; b < times.size(); ++b) {
      const auto ia = static_cast<Eigen::Index>(a);
      const auto ib = static_cast<Eigen::Index>(b);
      add("cov@" + tag(times[a]) + "," + tag(times[b]), {got.cov(ia, ib), got.cov_se(ia, ib)},
          {want.cov(ia, ib), want.cov_se(ia, ib)});
    }
  }
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    for (std::size_t a = 0; a < times.size(); ++a) {
      add("exp(-" + tag(lambdas[l]) + "x)@" + tag(times[a]), got.expo[l][a], want.expo[l][a]);
    }
  }
  return out;
}

}  // namespace detail

/// Checkpoint values of the weighted shifted ensemble and of the oracle ensemble.
struct McSamples {
  std::vector<std::size_t> nodes;
  std::vector<std::vector<double>> shifted;  // [checkpoint][path]
  std::vector<std::vector<double>> oracle;   // [checkpoint][path]
  std::vector<double> logZ;
};

/// Simulates N shifted paths (path_index 0..N-1) and N oracle paths (N..2N-1).
inline McSamples sample_mc(const McConfig& cfg, const Model& m, const ShiftPlan& plan) {
  McSamples s;
  std::vector<double> times = cfg.checkpoints;
  if (times.empty()) times = {cfg.T / 4.0, cfg.T / 2.0, 3.0 * cfg.T / 4.0, cfg.T};
  for (double t : times) s.nodes.push_back(m.grid.nearest(t));
  const std::size_t c = s.nodes.size();
  s.shifted.assign(c, std::vector<double>(cfg.N));
  s.oracle.assign(c, std::vector<double>(cfg.N));
  s.logZ.assign(cfg.N, 0.0);
  parallel_for(2 * cfg.N, [&](std::size_t p) {
    const auto w = gen_increments(m.grid, cfg.seed, p, m.head_levels());
    const auto R = rosenblatt_path(w, m.engine);
    if (p < cfg.N) {
      auto shift = stochastic_shift(m, plan, w.partition_increments());
      for (std::size_t a = 0; a < c; ++a) {
        const std::size_t i = s.nodes[a];
        s.shifted[a][p] = R[i] + shift[i] + plan.drift[i];
      }
      s.logZ[p] = log_density(plan, w).logZ.back();
    } else {
      for (std::size_t a = 0; a < c; ++a) s.oracle[a][p - cfg.N] = R[s.nodes[a]];
    }
  });
  return s;
}

inline McReport summarize_mc(const McConfig& cfg, const Model& m, const McSamples& s) {
  McReport r;
  r.config = cfg;
  for (std::size_t i : s.nodes) r.times.push_back(m.grid.node(i));
  const std::size_t N = s.logZ.size();
  // Weights are rescaled by exp(-max log Z) for the self-normalised estimates.
  const double top = *std::max_element(s.logZ.begin(), s.logZ.end());
  std::vector<double> w(N);
  std::vector<double> z(N);
  for (std::size_t i = 0; i < N; ++i) {
    w[i] = std::exp(s.logZ[i] - top);
    z[i] = std::exp(s.logZ[i]);
  }
  const auto mz = weighted_moment(z, std::vector<double>(N, 1.0), [](double v) { return v; });
  r.meanZ = mz.value;
  r.meanZ_se = mz.se;
  r.ess = ess(w);
  r.degenerate = r.ess < 0.01 * static_cast<double>(N);

  const std::size_t c = s.nodes.size();
  const std::size_t tests = 1 + c + c * (c + 1) / 2 + cfg.lambdas.size() * c;
  r.k_effective = cfg.bonferroni ? bonferroni_k(cfg.k, tests) : cfg.k;

  const std::vector<double> ones(N, 1.0);
  const auto want = detail::moments(s.oracle, ones, cfg.lambdas);
  const auto got = detail::moments(s.shifted, w, cfg.lambdas);
  const auto plain = detail::moments(s.shifted, ones, cfg.lambdas);
  r.stats.push_back({"meanZ", r.meanZ, r.meanZ_se, 1.0, 0.0,
                     std::abs(r.meanZ - 1.0) <= r.k_effective * r.meanZ_se});
  auto rest = detail::compare(got, want, r.times, cfg.lambdas, r.k_effective);
  r.stats.insert(r.stats.end(), rest.begin(), rest.end());
  r.sensitivity = detail::compare(plain, want, r.times, cfg.lambdas, r.k_effective);

  r.cov = got.cov;
  r.cov_se = got.cov_se;
  r.oracle_cov = want.cov;
  r.oracle_cov_se = want.cov_se;
  r.cov_verdict = covariance_compare(r.cov, r.cov_se, r.oracle_cov, r.oracle_cov_se, r.k_effective);

  r.pass = !r.degenerate && r.cov_verdict.pass &&
           std::all_of(r.stats.begin(), r.stats.end(), [](const Statistic& st) { return st.pass; });
  r.sensitivity_detected =
      std::any_of(r.sensitivity.begin(), r.sensitivity.end(), [](const Statistic& st) { return !st.pass; });
  return r;
}

inline McReport run_mc(const McConfig& cfg) {
  cfg.validate();
  const Model m{cfg.H, TimeGrid{cfg.T, cfg.n}, cfg.head_levels};
  const auto plan = make_plan(m, phi_from_theta(parse_shift(cfg.shift, m.grid, m.h), m.h, cfg.shift));
  return summarize_mc(cfg, m, sample_mc(cfg, m, plan));
}

/// One row per statistic: name,estimate,SE,oracle,oracle_SE,verdict.
inline void write_report_csv(std::ostream& os, const McReport& r) {
  const auto old = os.precision(17);
  os << "name,estimate,SE,oracle,oracle_SE,verdict\n";
  auto verdict = [&](bool ok) -> const char* {
    if (r.degenerate) return "suppressed";
    return ok ? "pass" : "fail";
  };
  os << "ess," << r.ess << ",0," << static_cast<double>(r.config.N) << ",0,info\n";
  for (const auto& s : r.stats) {
    os << s.name << ',' << s.estimate << ',' << s.se << ',' << s.oracle << ',' << s.oracle_se << ','
       << verdict(s.pass) << '\n';
  }
  for (const auto& s : r.sensitivity) {
    os << "unweighted:" << s.name << ',' << s.estimate << ',' << s.se << ',' << s.oracle << ',' << s.oracle_se
       << ',' << (s.pass ? "pass" : "fail") << '\n';
  }
  os << "overall," << (r.pass ? 1 : 0) << ",0,1,0," << verdict(r.pass) << '\n';
  os.precision(old);
}

inline void write_summary(std::ostream& os, const McReport& r) {
  const auto old = os.precision(6);
  os << "shift " << r.config.shift << ", H=" << r.config.H << ", n=" << r.config.n << ", N=" << r.config.N
     << ", seed=" << r.config.seed << '\n';
  os << "mean Z_T = " << r.meanZ << " +- " << r.meanZ_se << ", ESS = " << r.ess << " ("
     << 100.0 * r.ess / static_cast<double>(r.config.N) << "%)\n";
  if (r.degenerate) {
    os << "weight degeneracy: ESS below 1% of N, verdicts suppressed\n";
    os.precision(old);
    return;
  }
  std::size_t failed = 0;
  for (const auto& s : r.stats) {
    if (!s.pass) {
      ++failed;
      os << "  FAIL " << s.name << ": " << s.estimate << " +- " << s.se << " vs " << s.oracle << " +- "
         << s.oracle_se << '\n';
    }
  }
  os << r.stats.size() - failed << '/' << r.stats.size() << " statistics within " << r.k_effective
     << " combined SE; covariance " << (r.cov_verdict.pass ? "matches" : "differs") << '\n';
  os << "unweighted comparison " << (r.sensitivity_detected ? "fails (as it should)" : "passes") << '\n';
  os << (r.pass ? "PASS" : "FAIL") << '\n';
  os.precision(old);
}

}  // namespace rosenblatt

#endif
