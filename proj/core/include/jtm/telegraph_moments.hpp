#ifndef JTM_TELEGRAPH_MOMENTS_HPP
#define JTM_TELEGRAPH_MOMENTS_HPP

#include <array>
#include <cstddef>

#include "jtm/market.hpp"

namespace jtm {

/// Two-regime jump-telegraph process X_t = ∫ c_{ε(s)} ds + Σ J_n, where a
/// jump leaving regime i has mean eta_i and exponential moment phi_i.
struct TelegraphSpec {
  std::array<double, 2> tendency{};
  std::array<double, 2> intensity{};
  std::array<double, 2> jump_mean{};
  std::array<double, 2> jump_exp_moment{1.0, 1.0};

  void validate() const;
  TelegraphSpec swapped() const;
};

/// E_i[X_t].
double mean(const TelegraphSpec& spec, double t, std::size_t initial);
/// ∫_0^t E_i[X_s] ds.
double integrated_mean(const TelegraphSpec& spec, double t, std::size_t initial);
/// E_i[exp(X_t)].
double exp_moment(const TelegraphSpec& spec, double t, std::size_t initial);

/// Spec of the raw log-return process ∫μ ds + Σ f(Y) of a two-regime market.
/// The exponential moments are only computed when `with_exp_moment` is set
/// since they diverge for heavy-tailed marks.
TelegraphSpec return_spec(const MarketParams& params, bool with_exp_moment = false,
                          const QuadratureSettings& settings = {});

/// E_i[L_t] for L_t = X_t - ∫ λ η ds, computed through `mean`.
double compensated_martingale_mean(const MarketParams& params, double t, std::size_t initial,
                                   const QuadratureSettings& settings = {});

}  // namespace jtm

#endif  // JTM_TELEGRAPH_MOMENTS_HPP
