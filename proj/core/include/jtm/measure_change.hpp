#ifndef JTM_MEASURE_CHANGE_HPP
#define JTM_MEASURE_CHANGE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jtm/estimator.hpp"
#include "jtm/market.hpp"

namespace jtm {

/// Piecewise-linear φ(y) through (y_k, φ_k), flat outside the nodes.
struct TiltTable {
  std::vector<double> y;
  std::vector<double> phi;
  double operator()(double x) const;
};

enum class TiltFamily { Identity, Log, Power, Tabulated };

/// Per-regime positive mark function φ_i defining the density Z^φ, with
/// h_i = ∫ φ_i dF_i computed once at construction.
class TiltSpec {
 public:
  static TiltSpec identity(const MarketParams& params);
  /// φ_i = 1 / (1 + π_i f_i).
  static TiltSpec log(const MarketParams& params, std::vector<double> fractions,
                      const QuadratureSettings& settings = {});
  /// φ_i = (1 + π_i f_i)^(α-1).
  static TiltSpec power(const MarketParams& params, std::vector<double> fractions, double alpha,
                        const QuadratureSettings& settings = {});
  static TiltSpec tabulated(const MarketParams& params, std::vector<TiltTable> tables,
                            const QuadratureSettings& settings = {});

  TiltFamily family() const { return family_; }
  double phi(std::size_t regime, double y) const;
  double h(std::size_t regime) const { return h_.at(regime); }
  const std::vector<double>& fractions() const { return fractions_; }
  double alpha() const { return alpha_; }
  std::string describe() const;

 private:
  TiltSpec() = default;
  void compute_h(const MarketParams& params, const QuadratureSettings& settings);

  TiltFamily family_ = TiltFamily::Identity;
  std::vector<JumpMap> maps_;
  std::vector<double> fractions_;
  double alpha_ = 0.0;
  std::vector<TiltTable> tables_;
  std::vector<double> h_;
};

/// Z^φ as a path exponential: drift λ_i (1 - h_i), jump factor φ.
PathExponential density_process(const MarketParams& params, const TiltSpec& tilt);
/// H^φ = Z^φ / B: drift λ_i (1 - h_i) - r_i.
PathExponential state_price_process(const MarketParams& params, const TiltSpec& tilt);

double z_path(const MarketParams& params, const TiltSpec& tilt, const RegimePath& path, double t);
double state_price_density(const MarketParams& params, const TiltSpec& tilt,
                           const RegimePath& path, double t);

/// μ_i - r_i + λ_i ∫ f φ dF_i.
double martingale_condition_residual(const MarketParams& params, const TiltSpec& tilt,
                                     std::size_t regime, const QuadratureSettings& settings = {});

/// N_t(A) - ∫_0^t F_{ε(s)}(A) λ_{ε(s)} ds on one path.
double compensator_residual_on_path(const MarketParams& params, const MarkSet& set,
                                    const RegimePath& path, double t);
Estimate compensator_residual(const MarketParams& params, const MarkSet& set, double t,
                              std::uint64_t n_paths, std::uint64_t seed, std::size_t initial = 0,
                              unsigned workers = 0);

/// H_T V_T + ∫_0^T H_s c_s ds - x0 on one path.
double budget_gap_on_path(const MarketParams& params, const TiltSpec& tilt, const Policy& policy,
                          double x0, const RegimePath& path);
Estimate budget_gap(const MarketParams& params, const TiltSpec& tilt, const Policy& policy,
                    double x0, std::uint64_t n_paths, std::uint64_t seed, std::size_t initial = 0,
                    unsigned workers = 0);

}  // namespace jtm

#endif  // JTM_MEASURE_CHANGE_HPP
