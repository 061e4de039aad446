#ifndef JTM_QUADRATURE_HPP
#define JTM_QUADRATURE_HPP

#include <functional>

namespace jtm {

struct QuadratureSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod on a finite interval [a, b].
/// Throws QuadratureError when max_subdivisions is exhausted and
/// DivergenceError when the integrand produces a non-finite value.
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSettings& settings = {});

/// Computes  ∫_0^∞ g(v) · rate · e^{-rate v} dv.
///
/// The half line is cut into panels [0,1], [1,2], [2,4], ... (in units of
/// 1/rate) and each panel is integrated adaptively. Integration stops once
/// two consecutive panels are negligible past rate·v = 64. Partial sums that
/// keep growing until rate·v = 2^24, or a non-finite integrand, raise
/// DivergenceError.
QuadratureResult integrate_exponential_weight(const Integrand& g, double rate,
                                              const QuadratureSettings& settings = {});

}  // namespace jtm

#endif  // JTM_QUADRATURE_HPP
