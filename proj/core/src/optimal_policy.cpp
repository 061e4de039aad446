#include "jtm/optimal_policy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "jtm/errors.hpp"
#include "jtm/measure_change.hpp"

namespace jtm {
namespace {

Interval open_interior(Interval d) {
  d.lo_closed = false;
  d.hi_closed = false;
  return d;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DivergenceError(std::string(what) + " is not finite", v);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1), got " + format_double(alpha));
  }
}

}  // namespace

double g_log(const MarketParams& params, std::size_t regime, double pi,
             const QuadratureSettings& settings) {
  const RegimeSpec& reg = params.regime(regime);
  const double integral = reg.jump_dist.integrate(
      [&](double y) {
        const double f = reg.jump_map(y);
        return f / (1.0 + pi * f);
      },
      settings);
  require_finite(integral, "∫ f/(1+πf) dF");
  return reg.mu - reg.r + reg.lambda * integral;
}

Policy LogPolicySolution::policy(const MarketParams& params, double x0) const {
  return Policy(params, pi_bar, ConsumptionRule::log_optimal(x0));
}

RootResult solve_log_regime(const MarketParams& params, std::size_t regime,
                            const SolverSettings& settings) {
  const Interval dom = open_interior(params.fraction_domain(regime));
  auto g = [&](double pi) { return g_log(params, regime, pi, settings.quadrature); };
  try {
    return find_root(g, dom, 0.0, settings.root);
  } catch (const NoRootError& e) {
    throw NoRootError("regime " + std::to_string(regime) + ": g has no sign change (" + e.what() +
                          ")",
                      e.lo(), e.hi(), e.f_lo(), e.f_hi());
  }
}

LogPolicySolution solve_log(const MarketParams& params, const SolverSettings& settings) {
  LogPolicySolution sol;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const RootResult root = solve_log_regime(params, i, settings);
    sol.pi_bar.push_back(root.root);
    sol.g_residual.push_back(std::abs(root.f_root));
    sol.bracket.push_back({root.lo, root.hi, true, true});
    sol.bracket_g_lo.push_back(root.f_lo);
    sol.bracket_g_hi.push_back(root.f_hi);
  }
  if (params.size() == 2) {
    for (std::size_t i = 0; i < 2; ++i) {
      sol.value_const.push_back(log_value_two_regime(params, sol, 1.0, i, settings.quadrature));
    }
  }
  return sol;
}

TelegraphSpec log_wealth_spec(const MarketParams& params, const std::vector<double>& fractions,
                              const QuadratureSettings& settings) {
  if (params.size() != 2) throw DomainError("closed-form value needs m = 2");
  TelegraphSpec spec;
  for (std::size_t i = 0; i < 2; ++i) {
    const RegimeSpec& reg = params.regime(i);
    const double pi = fractions.at(i);
    spec.tendency[i] = pi * reg.mu + (1.0 - pi) * reg.r;
    spec.intensity[i] = reg.lambda;
    spec.jump_mean[i] = reg.jump_dist.integrate(
        [&](double y) { return std::log1p(pi * reg.jump_map(y)); }, settings);
    require_finite(spec.jump_mean[i], "∫ ln(1+πf) dF");
  }
  return spec;
}

double log_value_two_regime(const MarketParams& params, const LogPolicySolution& solution,
                            double x0, std::size_t initial, const QuadratureSettings& settings) {
  if (!(x0 > 0.0)) throw DomainError("x0 must be > 0");
  const TelegraphSpec spec = log_wealth_spec(params, solution.pi_bar, settings);
  const double T = params.horizon();
  const double constant =
      integrated_mean(spec, T, initial) + mean(spec, T, initial) - (T + 1.0) * std::log(T + 1.0);
  return (T + 1.0) * std::log(x0) + constant;
}

double log_value_slope(const MarketParams& params) { return params.horizon() + 1.0; }

PowerResiduals power_condition_residuals(const MarketParams& params, std::size_t regime, double pi,
                                         double alpha, const QuadratureSettings& settings) {
  check_alpha(alpha);
  const RegimeSpec& reg = params.regime(regime);
  const double q = alpha / (alpha - 1.0);
  const double i3 = reg.jump_dist.integrate(
      [&](double y) {
        const double f = reg.jump_map(y);
        return f * std::pow(1.0 + pi * f, alpha - 1.0);
      },
      settings);
  require_finite(i3, "∫ f u^(α-1) dF");
  const double i4 = reg.jump_dist.integrate(
      [&](double y) {
        const double u = 1.0 + pi * reg.jump_map(y);
        return std::pow(u, alpha - 1.0) * (u - q);
      },
      settings);
  require_finite(i4, "∫ [u^α - q u^(α-1)] dF");
  PowerResiduals res;
  res.res3 = reg.mu - reg.r + reg.lambda * i3;
  res.res4 = i4 - 1.0 - q * (reg.r - reg.lambda) / reg.lambda;
  return res;
}

double power_combined_residual(const MarketParams& params, std::size_t regime, double pi,
                               double alpha, const QuadratureSettings& settings) {
  check_alpha(alpha);
  const RegimeSpec& reg = params.regime(regime);
  const double h = reg.jump_dist.integrate(
      [&](double y) { return std::pow(1.0 + pi * reg.jump_map(y), alpha - 1.0); }, settings);
  require_finite(h, "∫ u^(α-1) dF");
  const double rhs =
      (pi * (1.0 - alpha) * (reg.mu - reg.r) + reg.lambda - alpha * reg.r) / reg.lambda;
  return h - rhs;
}

Policy PowerPolicySolution::policy(const MarketParams& params, double x0) const {
  return Policy(params, pi_bar, ConsumptionRule::power_optimal(x0, alpha));
}

namespace {

double implied_mu(const RegimeSpec& reg, double pi, double alpha,
                  const QuadratureSettings& settings) {
  const double i3 = reg.jump_dist.integrate(
      [&](double y) {
        const double f = reg.jump_map(y);
        return f * std::pow(1.0 + pi * f, alpha - 1.0);
      },
      settings);
  require_finite(i3, "∫ f u^(α-1) dF");
  return reg.r - reg.lambda * i3;
}

}  // namespace

// res4 has derivative απ ∫ f² u^(α-2) dF, so it falls then rises with its
// minimum -q r/λ at π = 0. Each side of 0 holds at most one root; the one
// whose implied drift is closest to the configured μ is reported.
PowerPolicySolution solve_power(const MarketParams& params, double alpha,
                                const SolverSettings& settings) {
  check_alpha(alpha);
  PowerPolicySolution sol;
  sol.alpha = alpha;
  const auto& qs = settings.quadrature;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const RegimeSpec& reg = params.regime(i);
    const Interval dom = open_interior(params.fraction_domain(i));
    auto k = [&](double pi) { return power_condition_residuals(params, i, pi, alpha, qs).res4; };

    std::vector<RootResult> roots;
    double probe_lo = dom.lo, probe_hi = dom.hi, k_lo = std::numeric_limits<double>::quiet_NaN(),
           k_hi = k_lo;
    auto search = [&](const Interval& part) {
      try {
        roots.push_back(find_root(k, part, 0.0, settings.root));
      } catch (const NoRootError& e) {
        probe_lo = e.lo();
        probe_hi = e.hi();
        k_lo = e.f_lo();
        k_hi = e.f_hi();
      }
    };
    if (dom.contains(0.0)) {
      const double k0 = k(0.0);
      if (std::abs(k0) <= settings.root.f_tol) {
        roots.push_back({0.0, k0, 0.0, 0.0, k0, k0, 1});
      } else if (k0 < 0.0) {
        search({0.0, dom.hi, false, false});
        search({dom.lo, 0.0, false, false});
      } else {
        probe_lo = probe_hi = 0.0;
        k_lo = k_hi = k0;
      }
    } else {
      search(dom);
    }
    if (roots.empty()) {
      throw NoRootError("regime " + std::to_string(i) +
                            ": power condition has no root (its minimum -q r/lambda is positive "
                            "whenever r > 0)",
                        probe_lo, probe_hi, k_lo, k_hi);
    }

    std::size_t best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    std::vector<double> mus;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      mus.push_back(implied_mu(reg, roots[j].root, alpha, qs));
      const double gap = std::abs(mus[j] - reg.mu);
      if (gap < best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    const RootResult& root = roots[best];
    const double mu_c = mus[best];
    sol.pi_bar.push_back(root.root);
    sol.mu_consistent.push_back(mu_c);
    sol.bracket.push_back({root.lo, root.hi, true, true});
    sol.roots_found.push_back(static_cast<int>(roots.size()));
    const MarketParams at_mu = params.with_drift(i, mu_c);
    const PowerResiduals r_c = power_condition_residuals(at_mu, i, root.root, alpha, qs);
    sol.res3.push_back(r_c.res3);
    sol.res4.push_back(r_c.res4);
    sol.res3_configured.push_back(power_condition_residuals(params, i, root.root, alpha, qs).res3);
    if (std::abs(mu_c - reg.mu) > 1e-8) sol.consistent = false;
  }

  if (params.size() == 2) {
    TelegraphSpec spec;
    for (std::size_t i = 0; i < 2; ++i) {
      const RegimeSpec& reg = params.regime(i);
      const double pi = sol.pi_bar[i];
      spec.tendency[i] = alpha * (pi * reg.mu + (1.0 - pi) * reg.r);
      spec.intensity[i] = reg.lambda;
      spec.jump_exp_moment[i] = reg.jump_dist.integrate(
          [&](double y) { return std::pow(1.0 + pi * reg.jump_map(y), alpha); }, qs);
      require_finite(spec.jump_exp_moment[i], "∫ u^α dF");
    }
    sol.value_spec = spec;
    sol.nu_bar = (spec.tendency[0] + spec.tendency[1]) / 2.0;
    sol.mu_bar = (spec.tendency[0] - spec.tendency[1]) / 2.0;
    sol.lambda_bar = (spec.intensity[0] + spec.intensity[1]) / 2.0;
    sol.zeta_bar = (spec.intensity[0] - spec.intensity[1]) / 2.0;
    sol.phi0 = spec.jump_exp_moment[0];
    sol.phi1 = spec.jump_exp_moment[1];
    const double skew = sol.mu_bar - sol.zeta_bar;
    sol.discriminant = skew * skew + spec.intensity[0] * spec.intensity[1] * sol.phi0 * sol.phi1;
  }
  return sol;
}

MarketParams consistent_market(const MarketParams& params, const PowerPolicySolution& solution) {
  MarketParams out = params;
  for (std::size_t i = 0; i < params.size(); ++i) {
    out = out.with_drift(i, solution.mu_consistent.at(i));
  }
  return out;
}

double power_value_two_regime(const MarketParams& params, const PowerPolicySolution& solution,
                              double x0, std::size_t initial) {
  if (params.size() != 2) throw DomainError("closed-form value needs m = 2");
  if (!(x0 > 0.0)) throw DomainError("x0 must be > 0");
  const double a = solution.alpha;
  return std::pow(x0, a) / a * exp_moment(solution.value_spec, params.horizon(), initial);
}

double power_consumption_from_density(const MarketParams& params,
                                      const PowerPolicySolution& solution, const RegimePath& path,
                                      double t, double x0) {
  const TiltSpec tilt = TiltSpec::power(params, solution.pi_bar, solution.alpha);
  const double h = state_price_density(params, tilt, path, t);
  return x0 / (params.horizon() + 1.0) * std::pow(h, 1.0 / (solution.alpha - 1.0));
}

double power_consumption(const MarketParams& params, const PowerPolicySolution& solution,
                         const RegimePath& path, double t, double x0) {
  const Policy policy = solution.policy(params, x0);
  const double c = consumption_rate(params, path, policy, t);
  if (solution.consistent) {
    const double other = power_consumption_from_density(params, solution, path, t, x0);
    if (std::abs(c - other) > 1e-9 * std::abs(c)) {
      throw NumericalError("power consumption forms disagree: " + format_double(c) + " vs " +
                           format_double(other));
    }
  }
  return c;
}

}  // namespace jtm
