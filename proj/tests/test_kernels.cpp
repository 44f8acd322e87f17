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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <rosenblatt/kernels.hpp>

namespace {

using namespace rosenblatt;

TEST(HurstParam, ConstantsMatchHighPrecisionValues) {
  const auto h = make_hurst(0.75);
  EXPECT_NEAR(h.cH, 0.267411158757997581, 1e-14);
  EXPECT_NEAR(h.dH, 0.659828879073858017, 1e-14);
  EXPECT_NEAR(h.eH, 0.0722765729245051374, 1e-15);
  const auto g = make_hurst(0.7);
  EXPECT_NEAR(g.cHalf, 0.328897063609257609, 1e-14);
  EXPECT_NEAR(g.dH, 0.628849980970410317, 1e-14);
  EXPECT_NEAR(g.eH, 0.0680247640952874742, 1e-15);
  for (const double H : {0.51, 0.6, 0.75, 0.9, 0.99}) {
    const auto p = make_hurst(H);
    EXPECT_NEAR(p.eH / (p.cHalf * p.cHalf), p.dH, 1e-14 * p.dH);
  }
}

TEST(HurstParam, RejectsOutOfRange) {
  EXPECT_THROW(make_hurst(0.5), std::invalid_argument);
  EXPECT_THROW(make_hurst(1.0), std::invalid_argument);
  EXPECT_THROW(make_hurst(0.3), std::invalid_argument);
  EXPECT_THROW(make_hurst(std::nan("")), std::invalid_argument);
}

TEST(FbmCovariance, Examples) {
  const auto h = make_hurst(0.75);
  EXPECT_DOUBLE_EQ(fbm_covariance(1.0, 1.0, h), 1.0);
  EXPECT_DOUBLE_EQ(fbm_covariance(0.3, 0.8, h), fbm_covariance(0.8, 0.3, h));
  EXPECT_NEAR(fbm_covariance(1.0, 2.0, h), std::sqrt(2.0), 1e-15);
}

TEST(VolterraKernel, PointwiseValue) {
  const auto h = make_hurst(0.75);
  EXPECT_NEAR(volterra_kernel_value(h, 1.0, 0.5), 0.937591963698057233, 1e-12);
  EXPECT_EQ(volterra_kernel_value(h, 1.0, 1.0), 0.0);
  EXPECT_EQ(volterra_kernel_value(h, 1.0, 1.5), 0.0);
}

TEST(VolterraKernel, SupportAndPositivity) {
  const auto h = make_hurst(0.8);
  const TimeGrid grid{2.0, 64};
  const auto km = volterra_kernel(h, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.steps(); ++j) {
      if (j >= i) {
        EXPECT_EQ(km(i, j), 0.0);
      } else {
        EXPECT_GT(km(i, j), 0.0);
      }
    }
  }
}

TEST(VolterraKernel, CellAveragesMatchQuadrature) {
  const auto h = make_hurst(0.75);
  const TimeGrid grid{1.0, 16};
  const auto km = volterra_kernel(h, grid);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (const auto& [i, j] : {std::pair<std::size_t, std::size_t>{16, 0}, {16, 7}, {16, 15}, {5, 4}}) {
    const double ti = grid.node(i);
    const double avg = ts.integrate([&](double s) { return volterra_kernel_value(h, ti, s); },
                                    grid.node(j), grid.node(j + 1)) /
                       grid.step();
    EXPECT_NEAR(km(i, j), avg, 1e-9 * avg) << i << "," << j;
  }
}

TEST(VolterraKernel, RowNormConvergesToVariance) {
  const auto h = make_hurst(0.75);
  auto gap = [&](std::size_t n) {
    const TimeGrid grid{1.0, n};
    const auto km = volterra_kernel(h, grid);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += km(n, j) * km(n, j) * grid.step();
    return 1.0 - acc;
  };
  const double g64 = gap(64);
  const double g512 = gap(512);
  EXPECT_GT(g512, 0.0);  // averaging can only lose mass
  EXPECT_LT(g512, 5e-3);
  EXPECT_LT(g512, g64);
}

TEST(VolterraKernel, CsvDump) {
  const TimeGrid grid{1.0, 2};
  const auto km = volterra_kernel(make_hurst(0.75), grid);
  std::ostringstream os;
  km.write_csv(os);
  std::istringstream is{os.str()};
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "row,col,value");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(VolterraKernelDeriv, IntegratesToKernelAndScales) {
  const auto h = make_hurst(0.7);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double s = 0.3;
  const double t = 0.9;
  // u = s + w^{1/a} with a = H - 1/2 removes the endpoint singularity.
  const double a = h.H - 0.5;
  const double integral = ts.integrate(
      [&](double w) {
        const double v = std::pow(w, 1.0 / a);
        // (s + v) - s cancels for tiny v; the product is then cH ((s + v)/s)^a / a.
        if (v < 1e-4 * s) return h.cH * std::pow((s + v) / s, a) / a;
        return volterra_kernel_deriv(h, s + v, s) * std::pow(w, 1.0 / a - 1.0) / a;
      },
      0.0, std::pow(t - s, a), 1e-14);
  EXPECT_NEAR(integral, volterra_kernel_value(h, t, s), 1e-10);
  const double lambda = 2.5;
  EXPECT_NEAR(volterra_kernel_deriv(h, lambda * 0.8, lambda * 0.2),
              std::pow(lambda, h.H - 1.5) * volterra_kernel_deriv(h, 0.8, 0.2), 1e-13);
  EXPECT_THROW(volterra_kernel_deriv(h, 0.5, 0.5), std::domain_error);
  EXPECT_THROW(volterra_kernel_deriv(h, 0.4, 0.5), std::domain_error);
}

TEST(RosenblattKernel, PointwiseValueAndSymmetry) {
  const auto h = make_hurst(0.75);
  EXPECT_NEAR(rosenblatt_kernel(h, 1.0, 0.3, 0.6), 0.356382913677101173, 1e-10);
  EXPECT_NEAR(rosenblatt_kernel(h, 1.0, 0.6, 0.3), rosenblatt_kernel(h, 1.0, 0.3, 0.6), 1e-15);
  EXPECT_GT(rosenblatt_kernel(h, 1.0, 0.1, 0.95), 0.0);
  EXPECT_EQ(rosenblatt_kernel(h, 0.5, 0.3, 0.6), 0.0);
  EXPECT_THROW(rosenblatt_kernel(h, 1.0, 0.0, 0.6), std::domain_error);
}

TEST(BetaIdentity, WithinOnePercent) {
  for (const double a : {0.15, 0.25, 0.35}) {
    for (const auto& [u, v] : {std::pair{0.3, 0.7}, std::pair{0.5, 0.9}}) {
      const double lhs = beta_identity_lhs(a, u, v, 512);
      const double rhs = std::pow(std::abs(u - v), 2.0 * a - 1.0);
      EXPECT_LT(std::abs(lhs / rhs - 1.0), 1e-2) << a << " " << u << " " << v;
      EXPECT_LT(std::abs(lhs / rhs - 1.0), 1e-6);
    }
  }
  EXPECT_THROW(beta_identity_lhs(0.5, 0.3, 0.7), std::invalid_argument);
  EXPECT_THROW(beta_identity_lhs(0.2, 0.3, 0.3), std::invalid_argument);
}

TEST(AdjointOp, IsometryOnIndicators) {
  const auto h = make_hurst(0.75);
  const TimeGrid grid{1.0, 512};
  const std::size_t is = 192;
  const std::size_t it = 448;
  const auto fs = adjoint_op(indicator(grid, {{0.0, grid.node(is)}}), h);
  const auto ft = adjoint_op(indicator(grid, {{0.0, grid.node(it)}}), h);
  const double s = grid.node(is);
  const double t = grid.node(it);
  EXPECT_NEAR(inner(ft, ft), fbm_covariance(t, t, h), 2e-3);
  EXPECT_NEAR(inner(fs, ft), fbm_covariance(s, t, h), 2e-3);
  // Pointwise it is the kernel itself.
  EXPECT_NEAR(ft.at(100), volterra_kernel_value(h, t, grid.node(100)), 1e-3);
  EXPECT_NEAR(ft.at(500), 0.0, 1e-12);
}

TEST(AdjointOp, ZeroMapsToZero) {
  const auto h = make_hurst(0.6);
  const TimeGrid grid{1.0, 32};
  const auto out = adjoint_op(constant(grid, 0.0), h);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_EQ(out.at(i), 0.0);
  const auto back = adjoint_op_inverse(constant(grid, 0.0), h);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_EQ(back.at(i), 0.0);
}

TEST(AdjointOp, InverseRecoversSmoothInput) {
  const auto h = make_hurst(0.7);
  const TimeGrid grid{1.0, 512};
  auto fn = [](double x) { return 1.0 + std::sin(3.0 * x); };
  const auto back = adjoint_op_inverse(adjoint_op(sample(grid, fn), h), h);
  // The s^{-(H-1/2)} factor makes the first few nodes inaccurate; check L2 and the bulk.
  double err = 0.0;
  double l2 = 0.0;
  double norm = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d = back.at(i) - fn(grid.node(i));
    l2 += d * d;
    norm += fn(grid.node(i)) * fn(grid.node(i));
    if (i >= 8) err = std::max(err, std::abs(d));
  }
  EXPECT_LT(std::sqrt(l2 / norm), 1e-3);
  EXPECT_LT(err, 1e-3);
}

TEST(AdjointOp, InverseOfIndicatorVanishesAfterT) {
  const auto h = make_hurst(0.75);
  const TimeGrid grid{1.0, 256};
  const std::size_t it = 128;
  const auto psi = adjoint_op_inverse(ramp_indicator(grid, it), h);
  for (std::size_t i = it + 1; i + 1 < grid.size(); ++i) EXPECT_NEAR(psi.at(i), 0.0, 1e-10);
}

TEST(KhOperator, InverseRecoversSmoothInput) {
  const auto h = make_hurst(0.8);
  const TimeGrid grid{1.0, 512};
  auto fn = [](double x) { return std::exp(-x) + x; };
  const auto f = kh_forward(sample(grid, fn), h);
  const auto back = kh_inverse(f, h);
  double err = 0.0;
  double l2 = 0.0;
  double norm = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d = back.at(i) - fn(grid.node(i));
    l2 += d * d;
    norm += fn(grid.node(i)) * fn(grid.node(i));
    if (i >= 8) err = std::max(err, std::abs(d));
  }
  EXPECT_LT(std::sqrt(l2 / norm), 1e-2);
  EXPECT_LT(err, 1e-2);
}

TEST(KhOperator, ForwardMatchesKernelMatrixProduct) {
  const auto h = make_hurst(0.75);
  const TimeGrid grid{1.0, 256};
  const auto phi = sample(grid, [](double x) { return std::cos(2.0 * x); });
  const auto f = kh_forward(phi, h);
  const auto km = volterra_kernel(h, grid);
  const auto avg = cell_averages(phi);
  for (const std::size_t i : {std::size_t{64}, std::size_t{256}}) {
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) acc += km(i, j) * avg[j] * grid.step();
    EXPECT_NEAR(f.at(i), acc, 1e-3);
  }
}

TEST(KhOperator, PowerShiftFamily) {
  // With H' = H/2 + 1/2 and theta(u) = cHalf B(H/2, 1 + alpha - H/2) u^{alpha + H/2},
  // K_{H'}^{-1} of int theta is u^alpha.
  const double H = 0.7;
  const double alpha = 0.25;
  const auto h = make_hurst(H);
  const auto hp = make_hurst(0.5 * H + 0.5);
  const TimeGrid grid{1.0, 512};
  const double c = h.cHalf * beta_fn(0.5 * H, 1.0 + alpha - 0.5 * H);
  const double e = alpha + 0.5 * H + 1.0;
  const auto f = sample(grid, [&](double x) { return c * std::pow(x, e) / e; });
  const auto phi = kh_inverse(f, hp);
  double err = 0.0;
  for (std::size_t i = 8; i + 1 < grid.size(); ++i) {
    err = std::max(err, std::abs(phi.at(i) - std::pow(grid.node(i), alpha)));
  }
  EXPECT_LT(err, 1e-2);
  EXPECT_THROW(kh_inverse(constant(grid, 1.0), hp), std::invalid_argument);
}

double weighted(const Eigen::MatrixXd& K, const RefinedPartition& part, bool square) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < K.rows(); ++j) {
    for (Eigen::Index k = 0; k < K.cols(); ++k) {
      const double v = square ? K(j, k) * K(j, k) : K(j, k);
      acc += v * part.width(static_cast<std::size_t>(j)) * part.width(static_cast<std::size_t>(k));
    }
  }
  return acc;
}

TEST(RosenblattKernelCells, TotalMassIsExact) {
  // Summed over all cell pairs, the averaged kernel keeps int int K_t =
  // e_H B(1 - H/2, H/2)^2 t^{H+1} / (H + 1).
  const auto h = make_hurst(0.75);
  const TimeGrid grid{1.0, 48};
  const RosenblattKernel rk{h, grid};
  const auto K = rk.cell_kernel(grid.steps());
  EXPECT_NEAR(weighted(K, rk.partition(), false), 0.477560674230706796, 1e-6);
  EXPECT_LT((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-9 * K.maxCoeff());
  EXPECT_GE(K.minCoeff(), 0.0);
  double trace = 0.0;
  for (std::size_t j = 0; j < rk.partition().cells(); ++j) {
    trace += K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) * rk.partition().width(j);
  }
  EXPECT_NEAR(rk.trace().back(), trace, 1e-10 * trace);
}

TEST(RosenblattKernelCells, VarianceApproachesOne) {
  // 2 sum_{j,k} Kbar^2 |j| |k| is the variance of the discrete double integral.
  const auto h = make_hurst(0.75);
  auto variance = [&](std::size_t n, std::size_t levels) {
    const TimeGrid grid{1.0, n};
    const RosenblattKernel rk{h, grid, {3, 3, levels}};
    return 2.0 * weighted(rk.cell_kernel(n), rk.partition(), true);
  };
  const double v32 = variance(32, 20);
  const double v128 = variance(128, 20);
  EXPECT_LT(v128, 1.0);
  EXPECT_GT(v128, v32);
  EXPECT_GT(v128, 0.97);
  // Without refinement near 0 the singularity of the kernel costs visibly more.
  EXPECT_LT(variance(128, 0), v128 - 0.05);
}

TEST(RosenblattKernelCells, CoarseRuleAgreesWithRefinedEngine) {
  const auto h = make_hurst(0.7);
  const TimeGrid grid{1.0, 64};
  const RosenblattKernel fast{h, grid};
  const RosenblattKernel exact{h, grid, {8, 100, 20}};
  std::mt19937_64 rng{7};
  std::vector<double> x(fast.partition().cells());
  for (std::size_t j = 0; j < x.size(); ++j) {
    std::normal_distribution<double> nd{0.0, std::sqrt(fast.partition().width(j))};
    x[j] = nd(rng);
  }
  const auto a = fast.double_integral(x);
  const auto b = exact.double_integral(x);
  double scale = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    err = std::max(err, std::abs(a[i] - b[i]));
  }
  EXPECT_LT(err, 1e-4 * scale);
  const auto zero = fast.quadratic_form(std::vector<double>(x.size(), 0.0));
  for (double v : zero) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(fast.double_integral(std::vector<double>(grid.steps(), 0.0)), std::invalid_argument);
}

TEST(RosenblattKernelCells, ShiftMomentsOfConstantMatchCellIntegrals) {
  // theta = 1 and x = cell widths give int_0^t int_0^u g(u, y) dy du.
  const auto h = make_hurst(0.75);
  const TimeGrid grid{1.0, 32};
  const RosenblattKernel rk{h, grid};
  const auto mom = rk.shift_moments(constant(grid, 1.0));
  std::vector<double> w(rk.partition().cells());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = rk.partition().width(j);
  const auto s = rk.apply_shift(mom, w);
  const double b = 0.5 * h.H;
  for (const std::size_t i : {std::size_t{8}, std::size_t{32}}) {
    const double t = grid.node(i);
    const double want = std::sqrt(h.eH) * beta_fn(1.0 - b, b) * std::pow(t, b + 1.0) / (b + 1.0);
    EXPECT_NEAR(s[i], want, 1e-9 * want) << i;
  }
}

}  // namespace
