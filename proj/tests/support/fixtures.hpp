#ifndef JTM_TESTS_FIXTURES_HPP
#define JTM_TESTS_FIXTURES_HPP

#include <cmath>
#include <vector>

#include "jtm/market.hpp"
#include "jtm/optimal_policy.hpp"

namespace jtm::testing {

// Two-regime market of the worked example: downward power jumps in regime 0,
// upward power jumps in regime 1, r = 1%.
inline MarketParams example_market(double eta0 = 1.0, double eta1 = 2.0, double mu0 = 0.16,
                                   double mu1 = -0.2, double horizon = 10.0) {
  return MarketParams({RegimeSpec{0.01, mu0, 0.3, MarkDistribution::negative_power(eta0)},
                       RegimeSpec{0.01, mu1, 1.2, MarkDistribution::positive_power(eta1)}},
                      horizon);
}

// μ that makes `target` a root of g: μ = r - λ ∫ f/(1+πf) dF.
inline double planted_log_mu(const RegimeSpec& reg, double target) {
  return reg.r - reg.lambda * reg.jump_dist.integrate([&](double y) {
    const double f = reg.jump_map(y);
    return f / (1.0 + target * f);
  });
}

inline MarketParams with_log_targets(const MarketParams& params, const std::vector<double>& targets) {
  MarketParams out = params;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out = out.with_drift(i, planted_log_mu(out.regime(i), targets[i]));
  }
  return out;
}

// Regime whose power conditions are solved by `target`: r from the μ-free
// condition, then μ from the drift condition.
inline RegimeSpec planted_power_regime(MarkDistribution dist, double lambda, double target,
                                       double alpha) {
  const double q = alpha / (alpha - 1.0);
  const auto u = [target](double y) { return 1.0 + target * y; };
  const double big_phi = dist.integrate([&](double y) { return std::pow(u(y), alpha); });
  const double h = dist.integrate([&](double y) { return std::pow(u(y), alpha - 1.0); });
  const double r = lambda + lambda * (big_phi - q * h - 1.0) / q;
  const double i3 = dist.integrate([&](double y) { return y * std::pow(u(y), alpha - 1.0); });
  return RegimeSpec{r, r - lambda * i3, lambda, std::move(dist)};
}

inline MarketOptions nonpositive_rates() {
  MarketOptions o;
  o.allow_nonpositive_rates = true;
  return o;
}

inline MarketParams power_market(double alpha, double target0 = 0.4, double target1 = -0.6,
                                 double horizon = 2.0) {
  return MarketParams(
      {planted_power_regime(MarkDistribution::negative_power(2.0), 0.3, target0, alpha),
       planted_power_regime(MarkDistribution::point_mass(0.25), 1.2, target1, alpha)},
      horizon, {}, nonpositive_rates());
}

}  // namespace jtm::testing

#endif
