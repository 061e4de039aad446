#include "jtm/telegraph_moments.hpp"

#include <cmath>
#include <string>

#include "jtm/errors.hpp"

namespace jtm {
namespace {

void check_args(double t, std::size_t initial) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("t must be finite and >= 0");
  if (initial > 1) throw DomainError("initial regime must be 0 or 1");
}

void require_two(const MarketParams& params) {
  if (params.size() != 2) {
    throw DomainError("closed form needs m = 2, market has " + std::to_string(params.size()));
  }
}

}  // namespace

void TelegraphSpec::validate() const {
  for (int i = 0; i < 2; ++i) {
    if (!(intensity[i] > 0.0) || !std::isfinite(intensity[i])) {
      throw ValidationError("telegraph intensity must be > 0");
    }
    if (!(jump_exp_moment[i] > 0.0)) throw ValidationError("jump exp moment must be > 0");
  }
}

TelegraphSpec TelegraphSpec::swapped() const {
  TelegraphSpec s;
  s.tendency = {tendency[1], tendency[0]};
  s.intensity = {intensity[1], intensity[0]};
  s.jump_mean = {jump_mean[1], jump_mean[0]};
  s.jump_exp_moment = {jump_exp_moment[1], jump_exp_moment[0]};
  return s;
}

namespace {

// With d_i = c_i + λ_i η_i the means solve m0' = λ0(m1 - m0) + d0 and
// m1' = λ1(m0 - m1) + d1. The combination λ1 m0 + λ0 m1 grows linearly and
// the difference m0 - m1 relaxes at rate λ0 + λ1.
double mean_from_first(const TelegraphSpec& spec, double t) {
  const double l0 = spec.intensity[0], l1 = spec.intensity[1];
  const double d0 = spec.tendency[0] + l0 * spec.jump_mean[0];
  const double d1 = spec.tendency[1] + l1 * spec.jump_mean[1];
  const double two_lambda = l0 + l1;
  const double weighted = (l1 * d0 + l0 * d1) * t;
  const double diff = (d0 - d1) * (-std::expm1(-two_lambda * t)) / two_lambda;
  return (weighted + l0 * diff) / two_lambda;
}

double integrated_mean_from_first(const TelegraphSpec& spec, double t) {
  const double l0 = spec.intensity[0], l1 = spec.intensity[1];
  const double d0 = spec.tendency[0] + l0 * spec.jump_mean[0];
  const double d1 = spec.tendency[1] + l1 * spec.jump_mean[1];
  const double two_lambda = l0 + l1;
  const double weighted = (l1 * d0 + l0 * d1) * t * t / 2.0;
  const double relax = t + std::expm1(-two_lambda * t) / two_lambda;
  const double diff = (d0 - d1) * relax / two_lambda;
  return (weighted + l0 * diff) / two_lambda;
}

double exp_moment_from_first(const TelegraphSpec& spec, double t) {
  if (t == 0.0) return 1.0;
  const double l0 = spec.intensity[0], l1 = spec.intensity[1];
  const double p0 = spec.jump_exp_moment[0], p1 = spec.jump_exp_moment[1];
  const double mu = (spec.tendency[0] - spec.tendency[1]) / 2.0;
  const double nu = (spec.tendency[0] + spec.tendency[1]) / 2.0;
  const double zeta = (l0 - l1) / 2.0;
  const double lambda = (l0 + l1) / 2.0;
  const double skew = mu - zeta;
  const double d = skew * skew + l0 * l1 * p0 * p1;
  const double root = std::sqrt(d);
  const double a = skew + l0 * p0;
  // cosh + (a/√D) sinh, written as two exponentials so large t stays finite
  const double up = 0.5 * std::exp(t * (nu - lambda + root)) * (1.0 + a / root);
  const double down = 0.5 * std::exp(t * (nu - lambda - root)) * (1.0 - a / root);
  return up + down;
}

}  // namespace

// Regime 1 is evaluated through the swapped spec so the two starting states
// are treated by literally the same arithmetic.
double mean(const TelegraphSpec& spec, double t, std::size_t initial) {
  check_args(t, initial);
  spec.validate();
  return initial == 0 ? mean_from_first(spec, t) : mean_from_first(spec.swapped(), t);
}

double integrated_mean(const TelegraphSpec& spec, double t, std::size_t initial) {
  check_args(t, initial);
  spec.validate();
  return initial == 0 ? integrated_mean_from_first(spec, t)
                      : integrated_mean_from_first(spec.swapped(), t);
}

double exp_moment(const TelegraphSpec& spec, double t, std::size_t initial) {
  check_args(t, initial);
  spec.validate();
  return initial == 0 ? exp_moment_from_first(spec, t) : exp_moment_from_first(spec.swapped(), t);
}

TelegraphSpec return_spec(const MarketParams& params, bool with_exp_moment,
                          const QuadratureSettings& settings) {
  require_two(params);
  TelegraphSpec spec;
  for (std::size_t i = 0; i < 2; ++i) {
    const RegimeSpec& reg = params.regime(i);
    spec.tendency[i] = reg.mu;
    spec.intensity[i] = reg.lambda;
    spec.jump_mean[i] = mean_jump(reg.jump_dist, reg.jump_map, settings);
    if (with_exp_moment) spec.jump_exp_moment[i] = exp_jump(reg.jump_dist, reg.jump_map, settings);
  }
  return spec;
}

double compensated_martingale_mean(const MarketParams& params, double t, std::size_t initial,
                                   const QuadratureSettings& settings) {
  TelegraphSpec spec = return_spec(params, false, settings);
  for (int i = 0; i < 2; ++i) spec.tendency[i] = -spec.intensity[i] * spec.jump_mean[i];
  return mean(spec, t, initial);
}

}  // namespace jtm
