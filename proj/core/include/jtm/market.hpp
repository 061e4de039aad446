#ifndef JTM_MARKET_HPP
#define JTM_MARKET_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "jtm/jump_distributions.hpp"
#include "jtm/random.hpp"

namespace jtm {

/// Parameters of one regime. Rates are per year.
struct RegimeSpec {
  double r;       // interest rate
  double mu;      // appreciation rate
  double lambda;  // exit intensity
  MarkDistribution jump_dist;
  JumpMap jump_map = JumpMap::identity();
  /// Optional portfolio constraint, intersected with the fractions that
  /// keep 1 + π f > 0.
  std::optional<Interval> fraction_bounds = std::nullopt;
};

struct MarketOptions {
  /// Accept r_i <= 0. Power-utility optimality conditions only have
  /// solutions when r_i <= 0, so fixtures for them need this.
  bool allow_nonpositive_rates = false;
};

class MarketParams {
 public:
  using Matrix = std::vector<std::vector<double>>;

  /// `transition` is the post-jump state distribution P (row i = law of the
  /// next state after leaving i). Empty means: alternating chain for m = 2,
  /// uniform over the other states for m > 2.
  MarketParams(std::vector<RegimeSpec> regimes, double horizon, Matrix transition = {},
               MarketOptions options = {});

  std::size_t size() const { return regimes_.size(); }
  const RegimeSpec& regime(std::size_t i) const { return regimes_.at(i); }
  const std::vector<RegimeSpec>& regimes() const { return regimes_; }
  const Matrix& transition() const { return transition_; }
  double horizon() const { return horizon_; }
  const MarketOptions& options() const { return options_; }

  /// Search domain for the fraction π_i: admissible set ∩ configured bounds.
  Interval fraction_domain(std::size_t i) const;

  MarketParams with_horizon(double horizon) const;
  MarketParams with_drift(std::size_t i, double mu) const;
  MarketParams with_rate(std::size_t i, double r) const;
  /// Relabels regimes by reversing their order (0 <-> 1 when m = 2).
  MarketParams swapped() const;

 private:
  std::vector<RegimeSpec> regimes_;
  double horizon_;
  Matrix transition_;
  MarketOptions options_;
};

struct JumpEvent {
  double time;
  std::size_t from;  // ε_n, the state right before the jump
  std::size_t to;
  double mark;       // Y_{ε_n, n}
};

/// One trajectory of the chain on [0, horizon], stored event-sparsely.
struct RegimePath {
  std::size_t initial_state = 0;
  std::vector<JumpEvent> events;
  std::size_t terminal_state = 0;
  double horizon = 0.0;

  /// ε(t), right-continuous.
  std::size_t state_at(double t) const;
};

RegimePath simulate_regime_path(const MarketParams& params, std::size_t initial_state,
                                RandomStream& rng);
RegimePath simulate_regime_path(const MarketParams& params, std::size_t initial_state,
                                std::uint64_t seed, std::uint64_t path_index);

enum class Limit { Right, Left };

/// A process of the form
///   scale · exp(∫_0^t rate_{ε(s)} ds) · Π_{τ_n ≤ t} factor(ε_n, Y_n)
/// evaluated exactly on a path. Wealth, prices, densities and consumption
/// plans in this market all have this shape.
struct PathExponential {
  double scale = 1.0;
  std::vector<double> rate;
  std::function<double(std::size_t, double)> factor;  // empty: no jumps

  /// Throws ModelViolation when a realized factor is not positive and finite.
  double value(const RegimePath& path, double t, Limit side = Limit::Right) const;
  /// ∫_0^t value ds.
  double integral(const RegimePath& path, double t) const;
  /// ∫_0^t ln(value) ds.
  double log_integral(const RegimePath& path, double t) const;
};

/// Pointwise product of two path exponentials, itself a path exponential.
PathExponential operator*(const PathExponential& a, const PathExponential& b);

/// ∫_0^t drift_{ε(s)} ds + Σ_{τ_n ≤ t} jump(ε_n, Y_n).
double path_telegraph(const RegimePath& path, double t, std::span<const double> drift,
                      const std::function<double(std::size_t, double)>& jump,
                      Limit side = Limit::Right);

/// Log-return telegraph process X_t = ∫ μ ds + Σ f(Y).
double telegraph_value(const MarketParams& params, const RegimePath& path, double t);

/// S_t = s0 · exp(∫ μ ds) · Π (1 + f(Y)).
double price_value(const MarketParams& params, const RegimePath& path, double t, double s0,
                   Limit side = Limit::Right);

enum class ConsumptionKind { None, LogOptimal, PowerOptimal, Constant };

struct ConsumptionRule {
  ConsumptionKind kind = ConsumptionKind::None;
  double x0 = 0.0;
  double alpha = 0.0;
  double rate = 0.0;

  static ConsumptionRule none() { return {}; }
  /// c_t = x0 · V_t^{1,π,0} / (T + 1).
  static ConsumptionRule log_optimal(double x0) { return {ConsumptionKind::LogOptimal, x0, 0.0, 0.0}; }
  /// c_t = x0/(T+1) · exp((1/α) ∫ λ(1 - Φ) ds) · Π (1 + π f), Φ_i = ∫ (1+π_i f)^α dF_i.
  static ConsumptionRule power_optimal(double x0, double alpha) {
    return {ConsumptionKind::PowerOptimal, x0, alpha, 0.0};
  }
  static ConsumptionRule constant(double rate) { return {ConsumptionKind::Constant, 0.0, 0.0, rate}; }
};

/// Regime-constant portfolio fractions plus a consumption rule.
class Policy {
 public:
  Policy(const MarketParams& params, std::vector<double> fractions,
         ConsumptionRule consumption = ConsumptionRule::none(),
         const QuadratureSettings& quadrature = {});

  const std::vector<double>& fractions() const { return fractions_; }
  double fraction(std::size_t i) const { return fractions_.at(i); }
  const ConsumptionRule& consumption() const { return consumption_; }
  Policy with_consumption(const MarketParams& params, ConsumptionRule rule) const;

  /// Per-regime drift of log c_t for PowerOptimal: (λ_i/α)(1 - Φ_i).
  const std::vector<double>& power_consumption_drift() const { return power_drift_; }

 private:
  std::vector<double> fractions_;
  ConsumptionRule consumption_;
  std::vector<double> power_drift_;
};

/// V^{1,π,0}: unit initial wealth, no consumption.
PathExponential unit_wealth_process(const MarketParams& params, const Policy& policy);
/// c_t as a path exponential (zero scale for ConsumptionKind::None).
PathExponential consumption_process(const MarketParams& params, const Policy& policy);
/// c_t / V_t^{1,π,0}, the integrand of ξ_t.
PathExponential consumption_per_unit_wealth(const MarketParams& params, const Policy& policy);

double wealth_no_consumption(const MarketParams& params, const RegimePath& path,
                             const Policy& policy, double t, double x0,
                             Limit side = Limit::Right);
/// V_t = ξ_t · V_t^{1,π,0} with ξ_t = x0 - ∫_0^t c_s / V_s^{1,π,0} ds.
double wealth_with_consumption(const MarketParams& params, const RegimePath& path,
                               const Policy& policy, double t, double x0,
                               Limit side = Limit::Right);
double consumption_rate(const MarketParams& params, const RegimePath& path, const Policy& policy,
                        double t);

}  // namespace jtm

#endif  // JTM_MARKET_HPP
