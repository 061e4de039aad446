#include "jtm/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jtm/errors.hpp"

namespace jtm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string regime_label(std::size_t i) { return "regime " + std::to_string(i); }

void check_time(const RegimePath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon)) {
    throw DomainError("time " + format_double(t) + " outside [0, " + format_double(path.horizon) +
                      "]");
  }
}

bool include_event(const JumpEvent& ev, double t, Limit side) {
  return side == Limit::Right ? ev.time <= t : ev.time < t;
}

Interval intersect(const Interval& a, const Interval& b) {
  Interval out = a;
  if (b.lo > out.lo || (b.lo == out.lo && !b.lo_closed)) {
    out.lo = b.lo;
    out.lo_closed = b.lo_closed;
  }
  if (b.hi < out.hi || (b.hi == out.hi && !b.hi_closed)) {
    out.hi = b.hi;
    out.hi_closed = b.hi_closed;
  }
  return out;
}

}  // namespace

MarketParams::MarketParams(std::vector<RegimeSpec> regimes, double horizon, Matrix transition,
                           MarketOptions options)
    : regimes_(std::move(regimes)), horizon_(horizon), transition_(std::move(transition)),
      options_(options) {
  const std::size_t m = regimes_.size();
  if (m < 2) throw ValidationError("market needs at least two regimes");
  if (!(horizon_ >= 0.0) || !std::isfinite(horizon_)) {
    throw ValidationError("horizon must be finite and nonnegative, got " + format_double(horizon_));
  }
  for (std::size_t i = 0; i < m; ++i) {
    const RegimeSpec& reg = regimes_[i];
    if (!std::isfinite(reg.r) || !std::isfinite(reg.mu)) {
      throw ValidationError(regime_label(i) + ": r and mu must be finite");
    }
    if (!options_.allow_nonpositive_rates && !(reg.r > 0.0)) {
      throw ValidationError(regime_label(i) + ": r must be > 0, got " + format_double(reg.r));
    }
    if (!(reg.lambda > 0.0) || !std::isfinite(reg.lambda)) {
      throw ValidationError(regime_label(i) + ": lambda must be > 0, got " +
                            format_double(reg.lambda));
    }
    try {
      validate_jump_map(reg.jump_dist, reg.jump_map);
    } catch (const ValidationError& e) {
      throw ValidationError(regime_label(i) + ": " + e.what());
    }
    if (reg.fraction_bounds && !(reg.fraction_bounds->lo < reg.fraction_bounds->hi)) {
      throw ValidationError(regime_label(i) + ": empty fraction bounds");
    }
  }

  if (transition_.empty()) {
    transition_.assign(m, std::vector<double>(m, 1.0 / static_cast<double>(m - 1)));
    for (std::size_t i = 0; i < m; ++i) transition_[i][i] = 0.0;
  }
  if (transition_.size() != m) throw ValidationError("transition matrix must be m x m");
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = transition_[i];
    if (row.size() != m) throw ValidationError("transition matrix must be m x m");
    if (row[i] != 0.0) {
      throw ValidationError("transition row " + std::to_string(i) + ": diagonal must be 0");
    }
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw ValidationError("transition row " + std::to_string(i) + ": entries must be >= 0");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("transition row " + std::to_string(i) + " sums to " +
                            format_double(sum));
    }
  }
  if (m == 2 && (transition_[0][1] != 1.0 || transition_[1][0] != 1.0)) {
    throw ValidationError("two-regime chain must alternate");
  }
}

Interval MarketParams::fraction_domain(std::size_t i) const {
  const RegimeSpec& reg = regime(i);
  Interval dom = admissible_fractions(reg.jump_dist, reg.jump_map);
  if (reg.fraction_bounds) dom = intersect(dom, *reg.fraction_bounds);
  return dom;
}

MarketParams MarketParams::with_horizon(double horizon) const {
  return MarketParams(regimes_, horizon, transition_, options_);
}

MarketParams MarketParams::with_drift(std::size_t i, double mu) const {
  auto regs = regimes_;
  regs.at(i).mu = mu;
  return MarketParams(std::move(regs), horizon_, transition_, options_);
}

MarketParams MarketParams::with_rate(std::size_t i, double r) const {
  auto regs = regimes_;
  regs.at(i).r = r;
  return MarketParams(std::move(regs), horizon_, transition_, options_);
}

MarketParams MarketParams::swapped() const {
  const std::size_t m = size();
  std::vector<RegimeSpec> regs(regimes_.rbegin(), regimes_.rend());
  Matrix p(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) p[i][j] = transition_[m - 1 - i][m - 1 - j];
  return MarketParams(std::move(regs), horizon_, std::move(p), options_);
}

std::size_t RegimePath::state_at(double t) const {
  std::size_t state = initial_state;
  for (const auto& ev : events) {
    if (ev.time > t) break;
    state = ev.to;
  }
  return state;
}

RegimePath simulate_regime_path(const MarketParams& params, std::size_t initial_state,
                                RandomStream& rng) {
  const std::size_t m = params.size();
  if (initial_state >= m) {
    throw DomainError("initial state " + std::to_string(initial_state) + " out of range");
  }
  RegimePath path;
  path.initial_state = initial_state;
  path.horizon = params.horizon();
  std::size_t state = initial_state;
  double t = 0.0;
  for (;;) {
    const RegimeSpec& reg = params.regime(state);
    t += rng.exponential(reg.lambda);
    if (t > path.horizon) break;
    const double mark = reg.jump_dist.sample(rng);
    std::size_t next = 1 - state;
    if (m > 2) {
      const auto& row = params.transition()[state];
      const double u = rng.uniform();
      double cum = 0.0;
      next = m;
      for (std::size_t j = 0; j < m; ++j) {
        if (row[j] <= 0.0) continue;
        cum += row[j];
        next = j;
        if (u < cum) break;
      }
    }
    path.events.push_back({t, state, next, mark});
    state = next;
  }
  path.terminal_state = state;
  return path;
}

RegimePath simulate_regime_path(const MarketParams& params, std::size_t initial_state,
                                std::uint64_t seed, std::uint64_t path_index) {
  RandomStream rng(seed, path_index);
  return simulate_regime_path(params, initial_state, rng);
}

namespace {

double checked_factor(const PathExponential& pe, const JumpEvent& ev) {
  const double f = pe.factor(ev.from, ev.mark);
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw ModelViolation("jump factor " + format_double(f) + " at t=" + format_double(ev.time) +
                         " (mark " + format_double(ev.mark) + ")");
  }
  return f;
}

}  // namespace

double PathExponential::value(const RegimePath& path, double t, Limit side) const {
  check_time(path, t);
  double exponent = 0.0;
  double product = 1.0;
  double prev = 0.0;
  std::size_t state = path.initial_state;
  for (const auto& ev : path.events) {
    if (!include_event(ev, t, side)) break;
    exponent += rate[state] * (ev.time - prev);
    if (factor) product *= checked_factor(*this, ev);
    prev = ev.time;
    state = ev.to;
  }
  exponent += rate[state] * (t - prev);
  return scale * std::exp(exponent) * product;
}

double PathExponential::integral(const RegimePath& path, double t) const {
  check_time(path, t);
  double exponent = 0.0;
  double product = 1.0;
  double prev = 0.0;
  double total = 0.0;
  std::size_t state = path.initial_state;
  auto segment = [&](double end) {
    const double k = rate[state];
    const double dt = end - prev;
    const double growth = k == 0.0 ? dt : std::expm1(k * dt) / k;
    total += scale * std::exp(exponent) * product * growth;
    exponent += k * dt;
  };
  for (const auto& ev : path.events) {
    if (ev.time > t) break;
    segment(ev.time);
    if (factor) product *= checked_factor(*this, ev);
    prev = ev.time;
    state = ev.to;
  }
  segment(t);
  return total;
}

double PathExponential::log_integral(const RegimePath& path, double t) const {
  check_time(path, t);
  if (!(scale > 0.0)) throw ModelViolation("log of a nonpositive process");
  double level = std::log(scale);
  double prev = 0.0;
  double total = 0.0;
  std::size_t state = path.initial_state;
  auto segment = [&](double end) {
    const double k = rate[state];
    const double dt = end - prev;
    total += level * dt + 0.5 * k * dt * dt;
    level += k * dt;
  };
  for (const auto& ev : path.events) {
    if (ev.time > t) break;
    segment(ev.time);
    if (factor) level += std::log(checked_factor(*this, ev));
    prev = ev.time;
    state = ev.to;
  }
  segment(t);
  return total;
}

PathExponential operator*(const PathExponential& a, const PathExponential& b) {
  if (a.rate.size() != b.rate.size()) throw DomainError("path exponentials of different size");
  PathExponential out{a.scale * b.scale, a.rate, {}};
  for (std::size_t i = 0; i < out.rate.size(); ++i) out.rate[i] += b.rate[i];
  if (a.factor && b.factor) {
    out.factor = [fa = a.factor, fb = b.factor](std::size_t i, double y) {
      return fa(i, y) * fb(i, y);
    };
  } else if (a.factor || b.factor) {
    out.factor = a.factor ? a.factor : b.factor;
  }
  return out;
}

double path_telegraph(const RegimePath& path, double t, std::span<const double> drift,
                      const std::function<double(std::size_t, double)>& jump, Limit side) {
  check_time(path, t);
  double x = 0.0;
  double prev = 0.0;
  std::size_t state = path.initial_state;
  for (const auto& ev : path.events) {
    if (!include_event(ev, t, side)) break;
    x += drift[state] * (ev.time - prev);
    x += jump(ev.from, ev.mark);
    prev = ev.time;
    state = ev.to;
  }
  return x + drift[state] * (t - prev);
}

namespace {

std::vector<double> drifts(const MarketParams& params) {
  std::vector<double> out;
  for (const auto& reg : params.regimes()) out.push_back(reg.mu);
  return out;
}

}  // namespace

double telegraph_value(const MarketParams& params, const RegimePath& path, double t) {
  const auto mu = drifts(params);
  return path_telegraph(path, t, mu, [&params](std::size_t i, double y) {
    return params.regime(i).jump_map(y);
  });
}

double price_value(const MarketParams& params, const RegimePath& path, double t, double s0,
                   Limit side) {
  if (!(s0 > 0.0)) throw DomainError("s0 must be > 0");
  PathExponential pe{s0, drifts(params), [&params](std::size_t i, double y) {
                       return 1.0 + params.regime(i).jump_map(y);
                     }};
  return pe.value(path, t, side);
}

Policy::Policy(const MarketParams& params, std::vector<double> fractions,
               ConsumptionRule consumption, const QuadratureSettings& quadrature)
    : fractions_(std::move(fractions)), consumption_(consumption) {
  const std::size_t m = params.size();
  if (fractions_.size() != m) throw ValidationError("policy needs one fraction per regime");
  for (std::size_t i = 0; i < m; ++i) {
    const RegimeSpec& reg = params.regime(i);
    const Interval dom = admissible_fractions(reg.jump_dist, reg.jump_map);
    if (!std::isfinite(fractions_[i]) || !dom.contains(fractions_[i])) {
      throw ValidationError(regime_label(i) + ": fraction " + format_double(fractions_[i]) +
                            " allows 1 + pi f <= 0 on the mark support");
    }
  }
  switch (consumption_.kind) {
    case ConsumptionKind::None:
      break;
    case ConsumptionKind::LogOptimal:
      if (!(consumption_.x0 > 0.0)) throw ValidationError("consumption x0 must be > 0");
      break;
    case ConsumptionKind::PowerOptimal: {
      if (!(consumption_.x0 > 0.0)) throw ValidationError("consumption x0 must be > 0");
      const double alpha = consumption_.alpha;
      if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
      for (std::size_t i = 0; i < m; ++i) {
        const RegimeSpec& reg = params.regime(i);
        const double pi = fractions_[i];
        const double big_phi = reg.jump_dist.integrate(
            [&](double y) { return std::pow(1.0 + pi * reg.jump_map(y), alpha); }, quadrature);
        power_drift_.push_back(reg.lambda / alpha * (1.0 - big_phi));
      }
      break;
    }
    case ConsumptionKind::Constant:
      if (!(consumption_.rate >= 0.0) || !std::isfinite(consumption_.rate)) {
        throw ValidationError("constant consumption rate must be >= 0");
      }
      break;
  }
}

Policy Policy::with_consumption(const MarketParams& params, ConsumptionRule rule) const {
  return Policy(params, fractions_, rule);
}

namespace {

std::function<double(std::size_t, double)> wealth_factor(const MarketParams& params,
                                                         const Policy& policy) {
  std::vector<JumpMap> maps;
  for (const auto& reg : params.regimes()) maps.push_back(reg.jump_map);
  return [maps = std::move(maps), fr = policy.fractions()](std::size_t i, double y) {
    return 1.0 + fr[i] * maps[i](y);
  };
}

std::vector<double> wealth_rates(const MarketParams& params, const Policy& policy) {
  std::vector<double> out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& reg = params.regime(i);
    const double pi = policy.fraction(i);
    out.push_back(pi * reg.mu + (1.0 - pi) * reg.r);
  }
  return out;
}

}  // namespace

PathExponential unit_wealth_process(const MarketParams& params, const Policy& policy) {
  return {1.0, wealth_rates(params, policy), wealth_factor(params, policy)};
}

PathExponential consumption_process(const MarketParams& params, const Policy& policy) {
  const auto& rule = policy.consumption();
  const double base = rule.x0 / (params.horizon() + 1.0);
  const std::size_t m = params.size();
  switch (rule.kind) {
    case ConsumptionKind::None:
      return {0.0, std::vector<double>(m, 0.0), {}};
    case ConsumptionKind::LogOptimal:
      return {base, wealth_rates(params, policy), wealth_factor(params, policy)};
    case ConsumptionKind::PowerOptimal:
      return {base, policy.power_consumption_drift(), wealth_factor(params, policy)};
    case ConsumptionKind::Constant:
      return {rule.rate, std::vector<double>(m, 0.0), {}};
  }
  return {};
}

PathExponential consumption_per_unit_wealth(const MarketParams& params, const Policy& policy) {
  const auto& rule = policy.consumption();
  const double base = rule.x0 / (params.horizon() + 1.0);
  const std::size_t m = params.size();
  const auto w = wealth_rates(params, policy);
  switch (rule.kind) {
    case ConsumptionKind::None:
      return {0.0, std::vector<double>(m, 0.0), {}};
    case ConsumptionKind::LogOptimal:
      return {base, std::vector<double>(m, 0.0), {}};
    case ConsumptionKind::PowerOptimal: {
      std::vector<double> k(m);
      for (std::size_t i = 0; i < m; ++i) k[i] = policy.power_consumption_drift()[i] - w[i];
      return {base, std::move(k), {}};
    }
    case ConsumptionKind::Constant: {
      std::vector<double> k(m);
      for (std::size_t i = 0; i < m; ++i) k[i] = -w[i];
      auto f = wealth_factor(params, policy);
      return {rule.rate, std::move(k), [f](std::size_t i, double y) { return 1.0 / f(i, y); }};
    }
  }
  return {};
}

double wealth_no_consumption(const MarketParams& params, const RegimePath& path,
                             const Policy& policy, double t, double x0, Limit side) {
  if (!(x0 > 0.0)) throw DomainError("x0 must be > 0");
  PathExponential pe = unit_wealth_process(params, policy);
  pe.scale = x0;
  try {
    return pe.value(path, t, side);
  } catch (const ModelViolation& e) {
    throw BankruptcyError(std::string("bankruptcy: ") + e.what());
  }
}

double wealth_with_consumption(const MarketParams& params, const RegimePath& path,
                               const Policy& policy, double t, double x0, Limit side) {
  if (!(x0 > 0.0)) throw DomainError("x0 must be > 0");
  if (policy.consumption().kind == ConsumptionKind::None) {
    return wealth_no_consumption(params, path, policy, t, x0, side);
  }
  const double v1 = wealth_no_consumption(params, path, policy, t, 1.0, side);
  // The integral is continuous in t, so the side only matters for V^1.
  const double spent = consumption_per_unit_wealth(params, policy).integral(path, t);
  const double xi = x0 - spent;
  if (!(xi > 0.0)) {
    throw RuinError("ruin at t=" + format_double(t) + ": xi=" + format_double(xi));
  }
  return xi * v1;
}

double consumption_rate(const MarketParams& params, const RegimePath& path, const Policy& policy,
                        double t) {
  return consumption_process(params, policy).value(path, t);
}

}  // namespace jtm
