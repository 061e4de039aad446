#include "jtm/monte_carlo.hpp"

#include <chrono>
#include <cmath>
#include <cstring>

#include "jtm/errors.hpp"
#include "jtm/telegraph_moments.hpp"

namespace jtm {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

PathExponential power_of(const PathExponential& pe, double a) {
  PathExponential out{std::pow(pe.scale, a), pe.rate, {}};
  for (double& k : out.rate) k *= a;
  if (pe.factor) {
    out.factor = [f = pe.factor, a](std::size_t i, double y) { return std::pow(f(i, y), a); };
  }
  return out;
}

// Horizon the functional looks at; shorter paths are prefixes of longer ones.
double needed_horizon(const MarketParams& params, const Functional& functional) {
  return std::visit(overloaded{
                        [](const fn::TelegraphMean& f) { return f.t; },
                        [](const fn::ExpMoment& f) { return f.t; },
                        [](const fn::CountMean& f) { return f.t; },
                        [](const fn::CompensatorResidual& f) { return f.t; },
                        [](const fn::CompensatedJumpMean& f) { return f.t; },
                        [&](const auto&) { return params.horizon(); },
                    },
                    functional);
}

std::vector<double> jump_means(const MarketParams& params) {
  std::vector<double> out;
  for (const auto& reg : params.regimes()) out.push_back(mean_jump(reg.jump_dist, reg.jump_map));
  return out;
}

void check_t(const MarketParams& params, double t) {
  if (!(t >= 0.0 && t <= params.horizon())) {
    throw DomainError("functional time " + format_double(t) + " outside [0, T]");
  }
}

// Precomputed pieces so the per-path work is pure arithmetic.
struct Prepared {
  std::function<double(const RegimePath&)> eval;
};

Prepared prepare(const MarketParams& params, const Functional& functional) {
  return std::visit(
      overloaded{
          [&](const fn::TelegraphMean& f) -> Prepared {
            check_t(params, f.t);
            return {[&params, t = f.t](const RegimePath& p) {
              return telegraph_value(params, p, t);
            }};
          },
          [&](const fn::ExpMoment& f) -> Prepared {
            check_t(params, f.t);
            return {[&params, t = f.t](const RegimePath& p) {
              return std::exp(telegraph_value(params, p, t));
            }};
          },
          [&](const fn::CountMean& f) -> Prepared {
            check_t(params, f.t);
            return {[set = f.set, t = f.t](const RegimePath& p) {
              double n = 0.0;
              for (const auto& ev : p.events) {
                if (ev.time > t) break;
                if (set.contains(ev.mark)) n += 1.0;
              }
              return n;
            }};
          },
          [&](const fn::ZTerminal& f) -> Prepared {
            return {[z = density_process(params, f.tilt), T = params.horizon()](
                        const RegimePath& p) { return z.value(p, T); }};
          },
          [&](const fn::BudgetGap& f) -> Prepared {
            return {[&params, f](const RegimePath& p) {
              return budget_gap_on_path(params, f.tilt, f.policy, f.x0, p);
            }};
          },
          [&](const fn::UtilityLog& f) -> Prepared {
            const bool consumes = f.policy.consumption().kind != ConsumptionKind::None;
            PathExponential c = consumption_process(params, f.policy);
            return {[&params, f, c, consumes, T = params.horizon()](const RegimePath& p) {
              const double terminal =
                  std::log(wealth_with_consumption(params, p, f.policy, T, f.x0));
              return consumes ? c.log_integral(p, T) + terminal : terminal;
            }};
          },
          [&](const fn::UtilityPower& f) -> Prepared {
            if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
            const bool consumes = f.policy.consumption().kind != ConsumptionKind::None;
            PathExponential ca = power_of(consumption_process(params, f.policy), f.alpha);
            return {[&params, f, ca, consumes, T = params.horizon()](const RegimePath& p) {
              const double v = wealth_with_consumption(params, p, f.policy, T, f.x0);
              const double terminal = std::pow(v, f.alpha) / f.alpha;
              return consumes ? ca.integral(p, T) / f.alpha + terminal : terminal;
            }};
          },
          [&](const fn::CompensatorResidual& f) -> Prepared {
            check_t(params, f.t);
            return {[&params, set = f.set, t = f.t](const RegimePath& p) {
              return compensator_residual_on_path(params, set, p, t);
            }};
          },
          [&](const fn::CompensatedJumpMean& f) -> Prepared {
            check_t(params, f.t);
            const auto eta = jump_means(params);
            std::vector<double> drift;
            for (std::size_t i = 0; i < params.size(); ++i) {
              drift.push_back(-params.regime(i).lambda * eta[i]);
            }
            return {[&params, drift, t = f.t](const RegimePath& p) {
              return path_telegraph(p, t, drift, [&params](std::size_t i, double y) {
                return params.regime(i).jump_map(y);
              });
            }};
          },
          [&](const fn::StatePricePower& f) -> Prepared {
            if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
            PathExponential hq =
                power_of(state_price_process(params, f.tilt), f.alpha / (f.alpha - 1.0));
            return {[hq, T = params.horizon()](const RegimePath& p) { return hq.value(p, T); }};
          },
          [&](const fn::Custom& f) -> Prepared { return {f.eval}; },
      },
      functional);
}

}  // namespace

std::string describe(const Functional& functional) {
  return std::visit(overloaded{
                        [](const fn::TelegraphMean&) { return std::string("telegraph-mean"); },
                        [](const fn::ExpMoment&) { return std::string("exp-moment"); },
                        [](const fn::CountMean&) { return std::string("count-mean"); },
                        [](const fn::ZTerminal&) { return std::string("z-terminal"); },
                        [](const fn::BudgetGap&) { return std::string("budget-gap"); },
                        [](const fn::UtilityLog&) { return std::string("utility-log"); },
                        [](const fn::UtilityPower&) { return std::string("utility-power"); },
                        [](const fn::CompensatorResidual&) {
                          return std::string("compensator-residual");
                        },
                        [](const fn::CompensatedJumpMean&) {
                          return std::string("compensated-jump-mean");
                        },
                        [](const fn::StatePricePower&) { return std::string("state-price-power"); },
                        [](const fn::Custom& c) { return c.name.empty() ? "custom" : c.name; },
                    },
                    functional);
}

void McJob::validate() const {
  if (n_paths < 100) throw ValidationError("n_paths must be >= 100");
}

double evaluate(const MarketParams& params, const Functional& functional, const RegimePath& path) {
  return prepare(params, functional).eval(path);
}

Estimate run(const MarketParams& params, const McJob& job) {
  job.validate();
  if (job.initial >= params.size()) throw DomainError("initial regime out of range");
  const Prepared prep = prepare(params, job.functional);
  const MarketParams sim = params.with_horizon(needed_horizon(params, job.functional));
  return estimate(job.n_paths, job.seed, job.workers, [&](std::uint64_t i) {
    return prep.eval(simulate_regime_path(sim, job.initial, job.seed, i));
  });
}

Estimate run_difference(const MarketParams& params, const McJob& job, const Functional& other) {
  job.validate();
  if (job.initial >= params.size()) throw DomainError("initial regime out of range");
  const Prepared a = prepare(params, job.functional);
  const Prepared b = prepare(params, other);
  const double horizon =
      std::max(needed_horizon(params, job.functional), needed_horizon(params, other));
  const MarketParams sim = params.with_horizon(horizon);
  return estimate(job.n_paths, job.seed, job.workers, [&](std::uint64_t i) {
    const RegimePath path = simulate_regime_path(sim, job.initial, job.seed, i);
    return a.eval(path) - b.eval(path);
  });
}

bool reproduce(const MarketParams& params, const McJob& job, const Estimate& estimate) {
  McJob again = job;
  again.seed = estimate.seed;
  again.n_paths = estimate.n;
  const Estimate second = run(params, again);
  if (std::memcmp(&second.mean, &estimate.mean, sizeof(double)) != 0 ||
      std::memcmp(&second.std_error, &estimate.std_error, sizeof(double)) != 0) {
    throw ReproducibilityError("rerun with seed " + std::to_string(estimate.seed) +
                                   " gave a different mean: " + format_double(estimate.mean) +
                                   " vs " + format_double(second.mean),
                               estimate.mean, second.mean);
  }
  return true;
}

}  // namespace jtm
