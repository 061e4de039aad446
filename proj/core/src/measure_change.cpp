#include "jtm/measure_change.hpp"

#include <algorithm>
#include <cmath>

#include "jtm/errors.hpp"

namespace jtm {
namespace {

std::vector<JumpMap> jump_maps(const MarketParams& params) {
  std::vector<JumpMap> maps;
  for (const auto& reg : params.regimes()) maps.push_back(reg.jump_map);
  return maps;
}

void check_fractions(const MarketParams& params, const std::vector<double>& fractions) {
  if (fractions.size() != params.size()) throw ValidationError("tilt needs one fraction per regime");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& reg = params.regime(i);
    if (!admissible_fractions(reg.jump_dist, reg.jump_map).contains(fractions[i])) {
      throw ValidationError("tilt fraction " + format_double(fractions[i]) + " in regime " +
                            std::to_string(i) + " makes φ non-positive on the support");
    }
  }
}

}  // namespace

double TiltTable::operator()(double x) const {
  if (x <= y.front()) return phi.front();
  if (x >= y.back()) return phi.back();
  const auto it = std::upper_bound(y.begin(), y.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - y.begin());
  const double w = (x - y[k - 1]) / (y[k] - y[k - 1]);
  return phi[k - 1] + w * (phi[k] - phi[k - 1]);
}

TiltSpec TiltSpec::identity(const MarketParams& params) {
  TiltSpec t;
  t.maps_ = jump_maps(params);
  t.h_.assign(params.size(), 1.0);
  return t;
}

TiltSpec TiltSpec::log(const MarketParams& params, std::vector<double> fractions,
                       const QuadratureSettings& settings) {
  check_fractions(params, fractions);
  TiltSpec t;
  t.family_ = TiltFamily::Log;
  t.maps_ = jump_maps(params);
  t.fractions_ = std::move(fractions);
  t.compute_h(params, settings);
  return t;
}

TiltSpec TiltSpec::power(const MarketParams& params, std::vector<double> fractions, double alpha,
                         const QuadratureSettings& settings) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  check_fractions(params, fractions);
  TiltSpec t;
  t.family_ = TiltFamily::Power;
  t.maps_ = jump_maps(params);
  t.fractions_ = std::move(fractions);
  t.alpha_ = alpha;
  t.compute_h(params, settings);
  return t;
}

TiltSpec TiltSpec::tabulated(const MarketParams& params, std::vector<TiltTable> tables,
                             const QuadratureSettings& settings) {
  if (tables.size() != params.size()) throw ValidationError("tilt needs one table per regime");
  for (const auto& tab : tables) {
    if (tab.y.size() < 2 || tab.y.size() != tab.phi.size()) {
      throw ValidationError("tilt table needs >= 2 nodes with matching values");
    }
    if (!std::is_sorted(tab.y.begin(), tab.y.end()) ||
        std::adjacent_find(tab.y.begin(), tab.y.end()) != tab.y.end()) {
      throw ValidationError("tilt table nodes must be strictly increasing");
    }
    for (double v : tab.phi) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("tilt table values must be > 0");
    }
  }
  TiltSpec t;
  t.family_ = TiltFamily::Tabulated;
  t.maps_ = jump_maps(params);
  t.tables_ = std::move(tables);
  t.compute_h(params, settings);
  return t;
}

void TiltSpec::compute_h(const MarketParams& params, const QuadratureSettings& settings) {
  h_.clear();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& dist = params.regime(i).jump_dist;
    double h;
    if (family_ == TiltFamily::Log) {
      // 1/(1+πf) = 1 - πf/(1+πf); the second form shares its integrand with
      // the log first-order condition, so the density inherits its root exactly.
      const double pi = fractions_[i];
      const JumpMap& f = maps_[i];
      h = 1.0 - pi * dist.integrate([&](double y) { return f(y) / (1.0 + pi * f(y)); }, settings);
    } else {
      h = dist.integrate([&](double y) { return phi(i, y); }, settings);
    }
    if (!std::isfinite(h)) throw DivergenceError("tilt mass h is not finite", h);
    if (!(h > 0.0)) throw ValidationError("tilt mass h must be > 0");
    h_.push_back(h);
  }
}

double TiltSpec::phi(std::size_t regime, double y) const {
  switch (family_) {
    case TiltFamily::Identity:
      return 1.0;
    case TiltFamily::Log:
      return 1.0 / (1.0 + fractions_[regime] * maps_[regime](y));
    case TiltFamily::Power:
      return std::pow(1.0 + fractions_[regime] * maps_[regime](y), alpha_ - 1.0);
    case TiltFamily::Tabulated:
      return tables_[regime](y);
  }
  return 1.0;
}

std::string TiltSpec::describe() const {
  switch (family_) {
    case TiltFamily::Identity:
      return "identity";
    case TiltFamily::Log:
      return "log";
    case TiltFamily::Power:
      return "power(alpha=" + format_double(alpha_) + ")";
    case TiltFamily::Tabulated:
      return "tabulated";
  }
  return "?";
}

PathExponential density_process(const MarketParams& params, const TiltSpec& tilt) {
  PathExponential pe;
  for (std::size_t i = 0; i < params.size(); ++i) {
    pe.rate.push_back(params.regime(i).lambda * (1.0 - tilt.h(i)));
  }
  if (tilt.family() != TiltFamily::Identity) {
    pe.factor = [tilt](std::size_t i, double y) { return tilt.phi(i, y); };
  }
  return pe;
}

PathExponential state_price_process(const MarketParams& params, const TiltSpec& tilt) {
  PathExponential pe = density_process(params, tilt);
  for (std::size_t i = 0; i < params.size(); ++i) pe.rate[i] -= params.regime(i).r;
  return pe;
}

double z_path(const MarketParams& params, const TiltSpec& tilt, const RegimePath& path, double t) {
  return density_process(params, tilt).value(path, t);
}

double state_price_density(const MarketParams& params, const TiltSpec& tilt,
                           const RegimePath& path, double t) {
  return state_price_process(params, tilt).value(path, t);
}

double martingale_condition_residual(const MarketParams& params, const TiltSpec& tilt,
                                     std::size_t regime, const QuadratureSettings& settings) {
  const RegimeSpec& reg = params.regime(regime);
  const double integral = reg.jump_dist.integrate(
      [&](double y) { return reg.jump_map(y) * tilt.phi(regime, y); }, settings);
  if (!std::isfinite(integral)) throw DivergenceError("∫ f φ dF is not finite", integral);
  return reg.mu - reg.r + reg.lambda * integral;
}

double compensator_residual_on_path(const MarketParams& params, const MarkSet& set,
                                    const RegimePath& path, double t) {
  std::vector<double> intensity;
  for (const auto& reg : params.regimes()) {
    intensity.push_back(reg.lambda * reg.jump_dist.probability(set));
  }
  double count = 0.0;
  for (const auto& ev : path.events) {
    if (ev.time > t) break;
    if (set.contains(ev.mark)) count += 1.0;
  }
  const double compensator =
      path_telegraph(path, t, intensity, [](std::size_t, double) { return 0.0; });
  return count - compensator;
}

Estimate compensator_residual(const MarketParams& params, const MarkSet& set, double t,
                              std::uint64_t n_paths, std::uint64_t seed, std::size_t initial,
                              unsigned workers) {
  const MarketParams local = params.with_horizon(std::max(t, 0.0));
  return estimate(n_paths, seed, workers, [&](std::uint64_t i) {
    const RegimePath path = simulate_regime_path(local, initial, seed, i);
    return compensator_residual_on_path(local, set, path, t);
  });
}

double budget_gap_on_path(const MarketParams& params, const TiltSpec& tilt, const Policy& policy,
                          double x0, const RegimePath& path) {
  if (!(x0 > 0.0)) throw DomainError("x0 must be > 0");
  const double T = path.horizon;
  const PathExponential h = state_price_process(params, tilt);
  const PathExponential hv = h * unit_wealth_process(params, policy);
  double xi = x0;
  double consumed = 0.0;
  if (policy.consumption().kind != ConsumptionKind::None) {
    xi = x0 - consumption_per_unit_wealth(params, policy).integral(path, T);
    if (!(xi > 0.0)) throw RuinError("ruin before T: xi=" + format_double(xi));
    consumed = (h * consumption_process(params, policy)).integral(path, T);
  }
  return xi * hv.value(path, T) + consumed - x0;
}

Estimate budget_gap(const MarketParams& params, const TiltSpec& tilt, const Policy& policy,
                    double x0, std::uint64_t n_paths, std::uint64_t seed, std::size_t initial,
                    unsigned workers) {
  return estimate(n_paths, seed, workers, [&](std::uint64_t i) {
    const RegimePath path = simulate_regime_path(params, initial, seed, i);
    return budget_gap_on_path(params, tilt, policy, x0, path);
  });
}

}  // namespace jtm
