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

// Command-line driver: simulate, verify, selftest, examples.
//
// Exit status: 0 ok, 1 usage or I/O error, 2 weight degeneracy, 3 model not
// reducible, 4 a verification or self-test check failed.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <rosenblatt/girsanov.hpp>
#include <rosenblatt/parallel.hpp>
#include <rosenblatt/selftest.hpp>
#include <rosenblatt/simulate.hpp>
#include <rosenblatt/verify.hpp>

namespace rb = rosenblatt;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kDegenerate = 2, kNotReducible = 3, kFailed = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double H = 0.7;
  double T = 1.0;
  std::size_t n = 256;
  std::optional<std::size_t> N;
  std::uint64_t seed = 1;
  std::string shift = "power:0";
  std::string out = ".";
  double k = 3.0;
  std::size_t threads = 0;
};

std::filesystem::path output_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec || !std::filesystem::is_directory(cfg.out)) {
    throw UsageError("output directory '" + cfg.out + "' cannot be created");
  }
  return cfg.out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os{path, std::ios::binary};
  if (!os || !(os << text) || !os.flush()) throw UsageError("cannot write " + path.string());
}

rb::McConfig mc_config(const RunConfig& cfg, const std::string& shift) {
  rb::McConfig mc;
  mc.H = cfg.H;
  mc.T = cfg.T;
  mc.n = cfg.n;
  mc.N = cfg.N.value_or(20000);
  mc.seed = cfg.seed;
  mc.shift = shift;
  mc.k = cfg.k;
  return mc;
}

int report(const rb::McReport& r, const std::filesystem::path& dir) {
  std::ostringstream csv;
  rb::write_report_csv(csv, r);
  write_file(dir / "report.csv", csv.str());
  rb::write_summary(std::cout, r);
  if (r.degenerate) {
    std::cerr << "error: importance weights degenerate (ESS " << r.ess << " of " << r.config.N
              << "); use a smaller shift or more paths\n";
    return kDegenerate;
  }
  return r.pass ? kOk : kFailed;
}

int cmd_simulate(const RunConfig& cfg) {
  const std::size_t N = cfg.N.value_or(10);
  if (N == 0) throw UsageError("--N must be positive");
  const auto dir = output_dir(cfg);
  const rb::Model m{cfg.H, rb::TimeGrid{cfg.T, cfg.n}};
  std::vector<std::string> rows(N);
  rb::parallel_for(N, [&](std::size_t p) {
    std::ostringstream os;
    rb::write_path_rows(os, rb::make_bundle(m, cfg.seed, p));
    rows[p] = os.str();
  });
  std::string text = std::string{rb::kPathsHeader} + "\n";
  for (const auto& r : rows) text += r;
  write_file(dir / "paths.csv", text);
  std::cout << "wrote " << N << " paths of " << m.grid.size() << " nodes to " << (dir / "paths.csv").string()
            << '\n';
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const auto dir = output_dir(cfg);
  return report(rb::run_mc(mc_config(cfg, cfg.shift)), dir);
}

int cmd_selftest(std::size_t n, double cH_factor) {
  const auto checks = rb::run_selftest({n, cH_factor});
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (!c.pass()) ++failed;
    std::printf("[%s] %-34s error %.3e  limit %.1e\n", c.pass() ? "PASS" : "FAIL", c.name.c_str(), c.error,
                c.limit);
  }
  std::printf("%zu/%zu checks passed\n", checks.size() - failed, checks.size());
  return failed == 0 ? kOk : kFailed;
}

int cmd_power(const RunConfig& cfg, double alpha) {
  const auto dir = output_dir(cfg);
  const rb::Model m{cfg.H, rb::TimeGrid{cfg.T, cfg.n}};
  std::ostringstream tag;
  tag.precision(17);
  tag << "power:" << alpha;
  const auto plan = rb::make_plan(m, rb::phi_from_theta(rb::power_theta(m.grid, m.h, alpha), m.h, tag.str()));

  const double b = 0.5 * m.h.H;
  const double c = m.h.cHalf * rb::beta_fn(b, 1.0 + alpha - b);
  const double p = 2.0 * alpha + m.h.H + 1.0;
  std::ostringstream theta;
  std::ostringstream drift;
  theta.precision(17);
  drift.precision(17);
  theta << "t,theta,phi\n";
  drift << "t,drift,closed_form,tilde_drift\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < m.grid.size(); ++i) {
    const double t = m.grid.node(i);
    const double exact = m.h.dH * c * c * std::pow(t, p) / p;
    theta << t << ',' << plan.spec.theta.at(i) << ',' << plan.spec.phi.at(i) << '\n';
    drift << t << ',' << plan.drift[i] << ',' << exact << ',' << plan.tilde_drift[i] << '\n';
    worst = std::max(worst, std::abs(plan.drift[i] - exact));
  }
  write_file(dir / "theta.csv", theta.str());
  write_file(dir / "drift.csv", drift.str());
  std::printf("phi(u) = u^%g, theta(u) = %.10g u^%g\n", alpha, c, alpha + b);
  if (std::abs(alpha + b) < 1e-12) std::printf("theta is the constant %.10g\n", c);
  std::printf("drift d_H int theta^2 = %.10g t^%g, max deviation from closed form %.3e\n", m.h.dH * c * c / p, p,
              worst);
  return report(rb::run_mc(mc_config(cfg, tag.str())), dir);
}

std::string interval_spec(double a, double b) {
  std::ostringstream os;
  os.precision(17);
  os << a << ',' << b;
  return os.str();
}

int cmd_indicator(const RunConfig& cfg, std::string A1, std::string A2) {
  if (A1.empty()) A1 = interval_spec(0.0, 0.5 * cfg.T);
  if (A2.empty()) A2 = interval_spec(0.25 * cfg.T, 0.75 * cfg.T);
  const auto dir = output_dir(cfg);
  const rb::Model m{cfg.H, rb::TimeGrid{cfg.T, cfg.n}};
  auto plan_for = [&](const std::string& A) {
    const std::string spec = "indicator:" + A;
    return rb::make_plan(m, rb::phi_from_theta(rb::parse_shift(spec, m.grid, m.h), m.h, spec));
  };
  const auto p1 = plan_for(A1);
  const auto p2 = plan_for(A2);
  const auto w = rb::gen_increments(m.grid, cfg.seed, 0);
  const auto x = w.partition_increments();
  const auto s1 = rb::stochastic_shift(m, p1, x);
  const auto s2 = rb::stochastic_shift(m, p2, x);

  std::ostringstream csv;
  csv.precision(17);
  csv << "t,drift_A1,drift_A2,dH_t,shift_A1,shift_A2\n";
  double drift_gap = 0.0;
  double l2 = 0.0;
  for (std::size_t i = 0; i < m.grid.size(); ++i) {
    const double t = m.grid.node(i);
    const double line = m.h.dH * t;
    drift_gap = std::max({drift_gap, std::abs(p1.drift[i] - line), std::abs(p2.drift[i] - line)});
    if (i > 0) l2 += 0.5 * m.grid.step() * (std::pow(s1[i] - s2[i], 2) + std::pow(s1[i - 1] - s2[i - 1], 2));
    csv << t << ',' << p1.drift[i] << ',' << p2.drift[i] << ',' << line << ',' << s1[i] << ',' << s2[i] << '\n';
  }
  l2 = std::sqrt(l2);
  write_file(dir / "indicator.csv", csv.str());
  const double drift_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, m.h.dH * cfg.T);
  const bool same = drift_gap <= drift_tol;
  const bool differ = l2 > 0.0;
  std::printf("A1 = [%s], A2 = [%s]\n", A1.c_str(), A2.c_str());
  std::printf("deterministic drifts vs d_H t: max deviation %.3e (%s)\n", drift_gap, same ? "identical" : "DIFFER");
  std::printf("stochastic shifts on path 0: L2 distance %.6g (%s)\n", l2, differ ? "differ" : "IDENTICAL");
  return same && differ ? kOk : kFailed;
}

rb::SampledFunction parse_coefficient(const std::string& text, const rb::Model& m, const char* name) {
  if (text.rfind("table:", 0) == 0) return rb::parse_shift(text, m.grid, m.h);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return rb::constant(m.grid, v);
  } catch (const std::exception&) {
  }
  throw UsageError(std::string{"--"} + name + " must be a number or table:PATH, got '" + text + "'");
}

int cmd_drift_removal(const RunConfig& cfg, const std::string& a_text, const std::string& b_text,
                      const std::string& sign_text) {
  const auto dir = output_dir(cfg);
  const rb::Model m{cfg.H, rb::TimeGrid{cfg.T, cfg.n}};
  const auto b = parse_coefficient(b_text, m, "b");
  rb::SampledFunction a = rb::constant(m.grid, 0.0);
  if (a_text.empty()) {
    for (std::size_t i = 0; i < m.grid.size(); ++i) a.values[i] = b.at(i) * b.at(i) / (4.0 * m.h.dH);
  } else {
    a = parse_coefficient(a_text, m, "a");
  }
  const int sign = sign_text == "-" ? -1 : 1;

  std::optional<rb::DriftRemoval> solved;
  try {
    solved = rb::drift_removal(a, b, m.h, sign);
  } catch (const rb::NotReducible& e) {
    std::printf("status=not_reducible node=%zu t=%.17g D=%.17g\n", e.node(), e.time(), e.discriminant());
    std::cerr << "error: " << e.what() << '\n';
    return kNotReducible;
  }
  const auto& r = *solved;
  if (!r.full && sign_text.empty()) {
    throw UsageError("D > 0 somewhere: choose the root with --sign + or --sign -");
  }

  std::ostringstream csv;
  csv.precision(17);
  csv << "t,a,b,D,theta\n";
  for (std::size_t i = 0; i < m.grid.size(); ++i) {
    csv << m.grid.node(i) << ',' << a.at(i) << ',' << b.at(i) << ',' << r.D[i] << ',' << r.theta.at(i) << '\n';
  }
  write_file(dir / "drift_removal.csv", csv.str());

  const double residual = rb::reduction_residual(m, rb::gen_increments(m.grid, cfg.seed, 0), a, b, r);
  const double tol = 1e-2;
  if (r.full) {
    std::printf("status=reducible D=0 everywhere: X = R~ (a Rosenblatt process under the new measure)\n");
  } else {
    std::printf("status=reducible D>=0: X = %sint D^(1/2) dB~ + R~ (centered under the new measure)\n",
                sign > 0 ? "-" : "+");
  }
  std::printf("pathwise relative residual on path 0: %.3e (tolerance %.0e)\n", residual, tol);
  return residual <= tol ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and measure-change verification for Rosenblatt processes"};
  app.set_config("--config", "", "TOML or INI file with option values; flags on the command line win");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--H", cfg.H, "Hurst index of the Rosenblatt process")->check(CLI::Range(0.5, 1.0));
  app.add_option("--T", cfg.T, "time horizon")->check(CLI::PositiveNumber);
  auto* n_opt = app.add_option("--n", cfg.n, "grid steps")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  app.add_option("--N", cfg.N, "number of paths");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--shift", cfg.shift, "none | power:ALPHA | indicator:a,b;c,d | table:PATH");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--k", cfg.k, "tolerance multiplier in standard errors")->check(CLI::PositiveNumber);
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");

  auto* simulate = app.add_subcommand("simulate", "write paths.csv with B, B^{H/2+1/2} and R^H");
  auto* verify = app.add_subcommand("verify", "Monte Carlo check of the measure change; writes report.csv");
  auto* selftest = app.add_subcommand("selftest", "deterministic invariant checks");
  double perturb = 1.0;
  selftest->add_option("--perturb-cH", perturb)->group("");
  auto* examples = app.add_subcommand("examples", "worked examples");
  examples->require_subcommand(1);
  auto* power = examples->add_subcommand("power", "phi(u) = u^alpha: theta, drift curve and verification");
  double alpha = 0.0;
  power->add_option("--alpha", alpha, "exponent of phi");
  auto* indicator = examples->add_subcommand("indicator", "two sets A with the same drift d_H t");
  std::string A1;
  std::string A2;
  indicator->add_option("--A1", A1, "first set as a,b;c,d (default 0,T/2)");
  indicator->add_option("--A2", A2, "second set (default T/4,3T/4)");
  auto* removal = examples->add_subcommand("drift-removal", "remove the drift of int a + int b dB + R");
  std::string a_text;
  std::string b_text = "1";
  std::string sign_text;
  removal->add_option("--a", a_text, "drift a: number or table:PATH (default b^2 / (4 d_H), so D = 0)");
  removal->add_option("--b", b_text, "FBM integrand b: number or table:PATH");
  removal->add_option("--sign", sign_text, "root of theta = (b +- sqrt(D)) / (2 d_H)")
      ->check(CLI::IsMember({"+", "-"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  rb::worker_threads() = cfg.threads;
  try {
    if (*simulate) return cmd_simulate(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*selftest) return cmd_selftest(n_opt->count() > 0 ? cfg.n : 512, perturb);
    if (*power) return cmd_power(cfg, alpha);
    if (*indicator) return cmd_indicator(cfg, A1, A2);
    if (*removal) return cmd_drift_removal(cfg, a_text, b_text, sign_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
