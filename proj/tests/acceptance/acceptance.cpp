// Acceptance checks: one PASS/FAIL line per criterion. Exit status is
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/fixtures.hpp"
#include "../support/ode_oracle.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "jtm/measure_change.hpp"
#include "jtm/monte_carlo.hpp"
#include "jtm/optimal_policy.hpp"
#include "jtm/telegraph_moments.hpp"

using namespace jtm;

namespace {

constexpr std::uint64_t kPaths = 200000;
constexpr double kSe = 4.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

// Tracks the worst standardized deviation over a group of Monte Carlo checks.
struct ZTracker {
  int total = 0, within = 0;
  double worst = 0.0;
  void add(double closed, const Estimate& e) {
    ++total;
    const double z = (e.mean - closed) / e.std_error;
    if (std::abs(e.mean - closed) <= kSe * e.std_error) ++within;
    worst = std::max(worst, std::abs(z));
  }
  bool ok() const { return within == total; }
};

Estimate mc(const MarketParams& p, Functional f, std::size_t initial, std::uint64_t seed,
            std::uint64_t n = kPaths) {
  return run(p, McJob{std::move(f), n, initial, seed, 0});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ac1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = jtm::testing::example_market();
  const auto spec = return_spec(p, false);
  ZTracker z;
  for (double t : {1.0, 5.0, 10.0}) {
    for (std::size_t i : {0u, 1u}) z.add(mean(spec, t, i), mc(p, fn::TelegraphMean{t}, i, 101));
  }
  const double elapsed = seconds_since(t0);
  o.pass = z.ok() && elapsed <= 60.0;
  o.detail << "mean: " << z.within << "/" << z.total << " within 4 SE, max |z| = " << z.worst
           << ", n = " << kPaths << ", " << elapsed << " s";
}

void ac2(Outcome& o) {
  const MarketParams p({RegimeSpec{0.01, 0.05, 0.3, MarkDistribution::negative_power(1.5)},
                        RegimeSpec{0.01, -0.1, 1.2, MarkDistribution::point_mass(0.25)}},
                       10.0);
  const auto spec = return_spec(p, true);
  ZTracker z;
  for (double t : {1.0, 5.0, 10.0}) {
    for (std::size_t i : {0u, 1u}) z.add(exp_moment(spec, t, i), mc(p, fn::ExpMoment{t}, i, 202));
  }
  const RegimeSpec reg{0.01, 0.05, 0.7, MarkDistribution::negative_power(1.5)};
  const MarketParams sym({reg, reg}, 12.0);
  const auto ss = return_spec(sym, true);
  double worst_rel = 0.0;
  for (double t : {0.5, 3.0, 12.0}) {
    const double expected = std::exp(t * (reg.mu - reg.lambda + reg.lambda * ss.jump_exp_moment[0]));
    for (std::size_t i : {0u, 1u}) {
      worst_rel = std::max(worst_rel, std::abs(exp_moment(ss, t, i) - expected) / expected);
    }
  }
  o.pass = z.ok() && worst_rel <= 1e-12;
  o.detail << "exp moment: " << z.within << "/" << z.total << " within 4 SE, max |z| = " << z.worst
           << "; symmetric reduction max rel err = " << worst_rel;
}

void ac3(Outcome& o) {
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> c(-0.5, 0.5), lam(0.1, 3.0), eta(-0.8, 1.5), phi(0.2, 3.0),
      time(0.1, 8.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    TelegraphSpec s;
    s.tendency = {c(gen), c(gen)};
    s.intensity = {lam(gen), lam(gen)};
    s.jump_mean = {eta(gen), eta(gen)};
    s.jump_exp_moment = {phi(gen), phi(gen)};
    const double t = time(gen);
    const double d0 = s.tendency[0] + s.intensity[0] * s.jump_mean[0];
    const double d1 = s.tendency[1] + s.intensity[1] * s.jump_mean[1];
    const auto m = jtm::testing::integrate_ode(
        [&](double, const jtm::testing::State& y) {
          return jtm::testing::State{s.intensity[0] * (y[1] - y[0]) + d0,
                                     s.intensity[1] * (y[0] - y[1]) + d1};
        },
        {0.0, 0.0}, t);
    const auto psi = jtm::testing::integrate_ode(
        [&](double, const jtm::testing::State& y) {
          return jtm::testing::State{
              (s.tendency[0] - s.intensity[0]) * y[0] + s.intensity[0] * s.jump_exp_moment[0] * y[1],
              (s.tendency[1] - s.intensity[1]) * y[1] + s.intensity[1] * s.jump_exp_moment[1] * y[0]};
        },
        {1.0, 1.0}, t);
    for (std::size_t i : {0u, 1u}) {
      worst = std::max(worst, std::abs(mean(s, t, i) - m[i]) / std::max(std::abs(m[i]), 1e-300));
      worst = std::max(worst, std::abs(exp_moment(s, t, i) - psi[i]) / std::abs(psi[i]));
    }
  }
  o.pass = worst <= 1e-8;
  o.detail << "20 random points, max rel diff vs ODE = " << worst;
}

void ac4(Outcome& o) {
  const auto p = jtm::testing::with_log_targets(jtm::testing::example_market(), {-0.5, 0.5});
  const auto sol = solve_log(p);
  const TiltSpec log_tilt = TiltSpec::log(p, sol.pi_bar);
  ZTracker l, zl, zp;
  for (std::size_t i : {0u, 1u}) {
    l.add(0.0, mc(p, fn::CompensatedJumpMean{p.horizon()}, i, 401));
    zl.add(1.0, mc(p, fn::ZTerminal{log_tilt}, i, 402));
  }
  for (double alpha : {0.3, 0.7}) {
    const auto q = jtm::testing::power_market(alpha);
    const auto psol = solve_power(q, alpha);
    const TiltSpec power_tilt = TiltSpec::power(q, psol.pi_bar, alpha);
    for (std::size_t i : {0u, 1u}) zp.add(1.0, mc(q, fn::ZTerminal{power_tilt}, i, 403));
  }
  o.pass = l.ok() && zl.ok() && zp.ok();
  o.detail << "L_T max |z| = " << l.worst << ", Z_T log tilt max |z| = " << zl.worst
           << ", Z_T power tilt max |z| = " << zp.worst << " (" << l.within + zl.within + zp.within
           << "/" << l.total + zl.total + zp.total << " within 4 SE)";
}

void ac5(Outcome& o) {
  const auto p = jtm::testing::example_market();
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<MarkSet> sets{{-1.0, -0.5}, {-0.5, 0.0}, {0.0, 0.5}, {0.5, 2.0}, {2.0, inf}};
  ZTracker z;
  for (const auto& set : sets) {
    for (double t : {1.0, 5.0, 10.0}) z.add(0.0, compensator_residual(p, set, t, kPaths, 505));
  }
  o.pass = z.ok();
  o.detail << "5 mark sets x 3 times: " << z.within << "/" << z.total
           << " within 4 SE, max |z| = " << z.worst;
}

void ac6(Outcome& o) {
  double worst_planted = 0.0;
  int solved = 0;
  for (double t0 : {-1.0, -0.5, 0.0, 0.5}) {
    for (double t1 : {0.2, 0.5, 0.8, 1.0}) {
      const auto p = jtm::testing::with_log_targets(jtm::testing::example_market(), {t0, t1});
      const auto sol = solve_log(p);
      worst_planted = std::max({worst_planted, std::abs(sol.pi_bar[0] - t0), std::abs(sol.pi_bar[1] - t1)});
      ++solved;
    }
  }
  SolverSettings tight;
  tight.root.f_tol = 1e-15;
  tight.root.x_tol = 1e-15;
  struct Atom {
    double y, lambda, mu;
  };
  const std::vector<std::pair<Atom, Atom>> atoms{{{-0.5, 0.3, 0.2}, {0.3, 1.2, -0.3}},
                                                 {{-0.2, 2.0, 0.5}, {1.5, 0.8, -0.5}}};
  const double r = 0.01;
  double worst_atom = 0.0;
  for (const auto& [a0, a1] : atoms) {
    const MarketParams p({RegimeSpec{r, a0.mu, a0.lambda, MarkDistribution::point_mass(a0.y)},
                          RegimeSpec{r, a1.mu, a1.lambda, MarkDistribution::point_mass(a1.y)}},
                         1.0);
    const auto sol = solve_log(p, tight);
    std::size_t i = 0;
    for (const Atom& a : {a0, a1}) {
      // μ - r + λ y/(1+πy) = 0
      const double analytic = -1.0 / a.y - a.lambda / (a.mu - r);
      worst_atom = std::max(worst_atom, std::abs(sol.pi_bar[i++] - analytic));
    }
  }
  o.pass = worst_planted <= 1e-8 && worst_atom <= 1e-10;
  o.detail << solved << " target pairs, max |pi_bar - target| = " << worst_planted
           << "; point-mass roots max |err| = " << worst_atom;
}

void ac7(Outcome& o) {
  const auto p = jtm::testing::with_log_targets(jtm::testing::example_market(), {-0.5, 0.5});
  const auto sol = solve_log(p);
  const double x0 = 1.0;
  const TiltSpec tilt = TiltSpec::log(p, sol.pi_bar);
  const Policy optimal = sol.policy(p, x0);
  double worst = 0.0;
  for (std::size_t i : {0u, 1u}) {
    const auto gaps = sample_values(kPaths, 701, 0, [&](std::uint64_t k) {
      return budget_gap_on_path(p, tilt, optimal, x0, simulate_regime_path(p, i, 701, k));
    });
    for (double g : gaps) worst = std::max(worst, std::abs(g));
  }
  const bool pathwise = worst <= 1e-12;

  // strictly suboptimal: fractions moved by 0.2, same proportional consumption
  const Policy sub(p, {sol.pi_bar[0] + 0.2, sol.pi_bar[1] + 0.2}, ConsumptionRule::log_optimal(x0));
  bool negative = true;
  std::ostringstream sub_detail;
  sub_detail.precision(4);
  for (std::size_t i : {0u, 1u}) {
    const Estimate e = mc(p, fn::BudgetGap{tilt, sub, x0}, i, 702);
    negative = negative && e.mean < -kSe * e.std_error;
    sub_detail << " [i=" << i << ": mean gap " << e.mean << ", SE " << e.std_error << "]";
  }
  o.pass = pathwise && negative;
  o.detail << "log-optimal max |gap| = " << worst << " over " << 2 * kPaths
           << " paths; suboptimal pair mean gap negative beyond 4 SE: " << (negative ? "yes" : "no")
           << sub_detail.str();
}

void ac8(Outcome& o) {
  const auto p = jtm::testing::with_log_targets(jtm::testing::example_market(), {-0.5, 0.5});
  const auto sol = solve_log(p);
  const double x0 = 1.7;
  ZTracker z;
  for (std::size_t i : {0u, 1u}) {
    z.add(log_value_two_regime(p, sol, x0, i), mc(p, fn::UtilityLog{sol.policy(p, x0), x0}, i, 801));
  }
  // θ(x) - θ(1) = (T+1) ln x, up to the rounding of the final subtraction
  double worst_ulps = 0.0;
  const double T = p.horizon();
  for (double x : {0.25, 0.5, 2.0, 7.3, 1e3}) {
    for (std::size_t i : {0u, 1u}) {
      const double a = log_value_two_regime(p, sol, x, i), b = sol.value_const[i];
      const double scale = std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b));
      worst_ulps = std::max(worst_ulps, std::abs((a - b) - (T + 1.0) * std::log(x)) / scale);
    }
  }
  o.pass = z.ok() && worst_ulps <= 2.0;
  o.detail << "theta vs MC: " << z.within << "/" << z.total << " within 4 SE, max |z| = " << z.worst
           << "; scaling deviation <= " << worst_ulps << " x eps(|theta(x)|+|theta(1)|)";
}

void ac9(Outcome& o) {
  ZTracker z;
  bool exact = true;
  const double x0 = 2.0;
  for (double alpha : {0.3, 0.7}) {
    const auto base = jtm::testing::power_market(alpha);
    // off the planted drifts so the closed form is not x0^α/α
    const auto p = base.with_drift(0, base.regime(0).mu + 0.05).with_drift(1, base.regime(1).mu - 0.05);
    const auto sol = solve_power(p, alpha);
    const Policy policy(p, sol.pi_bar);
    for (std::size_t i : {0u, 1u}) {
      z.add(power_value_two_regime(p, sol, x0, i), mc(p, fn::UtilityPower{policy, x0, alpha}, i, 901));
    }
    const auto p0 = p.with_horizon(0.0);
    const auto sol0 = solve_power(p0, alpha);
    for (std::size_t i : {0u, 1u}) {
      exact = exact && power_value_two_regime(p0, sol0, x0, i) == std::pow(x0, alpha) / alpha;
    }
  }
  o.pass = z.ok() && exact;
  o.detail << "theta vs MC: " << z.within << "/" << z.total << " within 4 SE, max |z| = " << z.worst
           << "; T = 0 gives x0^alpha/alpha exactly: " << (exact ? "yes" : "no");
}

void ac10(Outcome& o) {
  const double x0 = 1.0, delta = 0.1;
  double worst_z = std::numeric_limits<double>::infinity();
  int wins = 0, total = 0;
  auto compare = [&](const MarketParams& p, const std::vector<double>& pi_bar,
                     const std::function<Functional(const Policy&)>& utility, std::uint64_t seed) {
    const Policy best(p, pi_bar, ConsumptionRule::log_optimal(x0));
    for (double s : {-delta, delta}) {
      std::vector<double> moved = pi_bar;
      for (double& v : moved) v += s;
      const Policy other(p, moved, ConsumptionRule::log_optimal(x0));
      for (std::size_t i : {0u, 1u}) {
        const Estimate d = run_difference(p, McJob{utility(best), kPaths, i, seed, 0}, utility(other));
        const double z = d.mean / d.std_error;
        worst_z = std::min(worst_z, z);
        ++total;
        if (d.mean > 2.0 * d.std_error) ++wins;
      }
    }
  };
  const auto lp = jtm::testing::with_log_targets(jtm::testing::example_market(), {-0.5, 0.5});
  compare(lp, solve_log(lp).pi_bar,
          [&](const Policy& pol) { return Functional(fn::UtilityLog{pol, x0}); }, 1001);
  const double alpha = 0.3;
  const auto pp = jtm::testing::power_market(alpha, 0.4, -0.6, 10.0);
  compare(pp, solve_power(pp, alpha).pi_bar,
          [&](const Policy& pol) { return Functional(fn::UtilityPower{pol, x0, alpha}); }, 1002);
  o.pass = wins == total;
  o.detail << wins << "/" << total << " comparisons with J(pi_bar) - J(pi_bar +- 0.1) > 2 paired SE"
           << ", smallest ratio = " << worst_z;
}

void ac11(Outcome& o) {
  double worst_res = 0.0, worst_combined = 0.0;
  for (double alpha : {0.3, 0.7}) {
    const auto p = jtm::testing::power_market(alpha);
    const auto sol = solve_power(p, alpha);
    const auto q = consistent_market(p, sol);
    for (std::size_t i : {0u, 1u}) {
      const auto res = power_condition_residuals(q, i, sol.pi_bar[i], alpha);
      worst_res = std::max({worst_res, std::abs(res.res3), std::abs(res.res4)});
      // along the curve where the drift condition holds, the combined form
      // equals (1 - α) times the μ-free condition
      for (double pi : {-0.8, -0.3, 0.0, 0.2, 0.6, 0.9}) {
        if (!q.fraction_domain(i).contains(pi)) continue;
        const double mu = q.regime(i).mu - power_condition_residuals(q, i, pi, alpha).res3;
        const auto on = q.with_drift(i, mu);
        const auto r = power_condition_residuals(on, i, pi, alpha);
        worst_combined = std::max(worst_combined,
                                std::abs(power_combined_residual(on, i, pi, alpha) - (1.0 - alpha) * r.res4));
      }
    }
  }
  o.pass = worst_res <= 1e-9 && worst_combined <= 1e-10;
  o.detail << "max residual at (pi_bar, mu_consistent) = " << worst_res
           << "; combined form vs (1 - alpha) x mu-free form, max diff = " << worst_combined;
}

void ac12(Outcome& o) {
  int compared = 0;
  bool same = true;
  for (const char* name : {"log_example.yaml", "power_fixture.yaml"}) {
    cli::Config cfg = cli::load_config(std::string(JTM_SOURCE_DIR) + "/configs/" + name);
    cfg.mc.n_paths = 20000;
    cfg.mc.workers = 1;
    const auto a = cli::run_suite(cfg, "all");
    for (unsigned w : {3u, 8u}) {
      cfg.mc.workers = w;
      const auto b = cli::run_suite(cfg, "all");
      same = same && a.size() == b.size();
      for (std::size_t k = 0; same && k < a.size(); ++k) {
        same = std::memcmp(&a[k].estimate, &b[k].estimate, sizeof(double)) == 0 &&
               std::memcmp(&a[k].std_error, &b[k].std_error, sizeof(double)) == 0;
        ++compared;
      }
    }
  }
  o.pass = same;
  o.detail << compared << " estimates compared across 1, 3 and 8 workers, bit-identical: "
           << (same ? "yes" : "no");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3},   {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}, {"AC12", ac12}};
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    o.detail.precision(4);
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
