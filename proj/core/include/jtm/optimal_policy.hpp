#ifndef JTM_OPTIMAL_POLICY_HPP
#define JTM_OPTIMAL_POLICY_HPP

#include <cstddef>
#include <vector>

#include "jtm/market.hpp"
#include "jtm/root_finding.hpp"
#include "jtm/telegraph_moments.hpp"

namespace jtm {

struct SolverSettings {
  QuadratureSettings quadrature{};
  RootOptions root{};
};

/// g_i(π) = μ_i - r_i + λ_i ∫ f/(1+πf) dF_i.
double g_log(const MarketParams& params, std::size_t regime, double pi,
             const QuadratureSettings& settings = {});

struct LogPolicySolution {
  std::vector<double> pi_bar;
  std::vector<double> g_residual;  // |g_i(π̄_i)|
  std::vector<Interval> bracket;
  std::vector<double> bracket_g_lo, bracket_g_hi;
  /// θ_i(1); empty unless m = 2.
  std::vector<double> value_const;

  Policy policy(const MarketParams& params, double x0) const;
};

/// Root of g_regime on the open interior of the fraction domain.
RootResult solve_log_regime(const MarketParams& params, std::size_t regime,
                            const SolverSettings& settings = {});
LogPolicySolution solve_log(const MarketParams& params, const SolverSettings& settings = {});

/// Mean-of-log-wealth telegraph spec for V^{1,π,0}: tendencies
/// π_iμ_i + (1-π_i)r_i, jumps ln(1+π_i f).
TelegraphSpec log_wealth_spec(const MarketParams& params, const std::vector<double>& fractions,
                              const QuadratureSettings& settings = {});

/// E_i[∫_0^T ln ĉ_t dt + ln V_T] for the log-optimal pair, m = 2.
double log_value_two_regime(const MarketParams& params, const LogPolicySolution& solution,
                            double x0, std::size_t initial,
                            const QuadratureSettings& settings = {});
/// ∂θ_i/∂ln x of the closed form.
double log_value_slope(const MarketParams& params);

struct PowerResiduals {
  double res3 = 0.0;  // μ - r + λ ∫ f u^(α-1) dF
  double res4 = 0.0;  // ∫ [u^α - q u^(α-1)] dF - 1 - q (r-λ)/λ,  q = α/(α-1)
};

/// u = 1 + π f. res4 does not involve μ.
PowerResiduals power_condition_residuals(const MarketParams& params, std::size_t regime, double pi,
                                         double alpha, const QuadratureSettings& settings = {});

/// ∫ u^(α-1) dF - [π(1-α)(μ-r) + λ - α r]/λ: the equivalent of res4 once
/// res3 = 0 holds.
double power_combined_residual(const MarketParams& params, std::size_t regime, double pi,
                               double alpha, const QuadratureSettings& settings = {});

struct PowerPolicySolution {
  double alpha = 0.0;
  std::vector<double> pi_bar;
  std::vector<double> mu_consistent;
  std::vector<double> res3;  // at mu_consistent
  std::vector<double> res4;
  std::vector<double> res3_configured;  // at the configured μ
  std::vector<Interval> bracket;
  std::vector<int> roots_found;  // branches of res4 = 0 found in the domain
  bool consistent = true;        // configured μ within 1e-8 of mu_consistent everywhere

  // two-regime value parameters; zero when m != 2
  double nu_bar = 0.0, mu_bar = 0.0, lambda_bar = 0.0, zeta_bar = 0.0;
  double phi0 = 0.0, phi1 = 0.0, discriminant = 0.0;
  TelegraphSpec value_spec{};

  Policy policy(const MarketParams& params, double x0) const;
};

PowerPolicySolution solve_power(const MarketParams& params, double alpha,
                                const SolverSettings& settings = {});

/// Market with each μ_i replaced by the solution's mu_consistent.
MarketParams consistent_market(const MarketParams& params, const PowerPolicySolution& solution);

/// E_i[(V_T^{x0,π̄,0})^α / α], m = 2.
double power_value_two_regime(const MarketParams& params, const PowerPolicySolution& solution,
                              double x0, std::size_t initial);

/// ĉ_t from its product form x0/(T+1) exp(∫ (λ/α)(1-Φ) ds) Π(1+π̄f),
/// Φ_i = ∫ (1+π̄_i f)^α dF_i. Checked against the state-price form when the
/// configured μ is consistent.
double power_consumption(const MarketParams& params, const PowerPolicySolution& solution,
                         const RegimePath& path, double t, double x0);
/// ĉ_t = x0/(T+1) · (H_t)^(1/(α-1)) with the power tilt.
double power_consumption_from_density(const MarketParams& params,
                                      const PowerPolicySolution& solution, const RegimePath& path,
                                      double t, double x0);

}  // namespace jtm

#endif  // JTM_OPTIMAL_POLICY_HPP
