#ifndef JTM_MONTE_CARLO_HPP
#define JTM_MONTE_CARLO_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "jtm/estimator.hpp"
#include "jtm/market.hpp"
#include "jtm/measure_change.hpp"

namespace jtm {

namespace fn {

struct TelegraphMean { double t; };          // X_t
struct ExpMoment { double t; };              // exp(X_t)
struct CountMean { MarkSet set; double t; }; // N_t(A)
struct ZTerminal { TiltSpec tilt; };         // Z_T
struct BudgetGap { TiltSpec tilt; Policy policy; double x0; };
/// ∫_0^T ln c dt + ln V_T (terminal term only without consumption).
struct UtilityLog { Policy policy; double x0; };
/// ∫_0^T c^α/α dt + V_T^α/α (terminal term only without consumption).
struct UtilityPower { Policy policy; double x0; double alpha; };
struct CompensatorResidual { MarkSet set; double t; };
/// L_t = X_t - ∫ λ η ds.
struct CompensatedJumpMean { double t; };
/// (H_T)^(α/(α-1)).
struct StatePricePower { TiltSpec tilt; double alpha; };
struct Custom {
  std::string name;
  std::function<double(const RegimePath&)> eval;
};

}  // namespace fn

using Functional =
    std::variant<fn::TelegraphMean, fn::ExpMoment, fn::CountMean, fn::ZTerminal, fn::BudgetGap,
                 fn::UtilityLog, fn::UtilityPower, fn::CompensatorResidual,
                 fn::CompensatedJumpMean, fn::StatePricePower, fn::Custom>;

std::string describe(const Functional& functional);

struct McJob {
  Functional functional;
  std::uint64_t n_paths = 10000;
  std::size_t initial = 0;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Path i is drawn from RandomStream(seed, i), so the sample set does not
/// depend on the worker count.
Estimate run(const MarketParams& params, const McJob& job);

/// Common-random-number comparison: per path, a(path) - b(path).
Estimate run_difference(const MarketParams& params, const McJob& job, const Functional& other);

/// Reruns the job and compares means bit for bit. Throws
/// ReproducibilityError on mismatch.
bool reproduce(const MarketParams& params, const McJob& job, const Estimate& estimate);

/// Value of a functional on one path (the path must reach the horizon the
/// functional needs).
double evaluate(const MarketParams& params, const Functional& functional, const RegimePath& path);

}  // namespace jtm

#endif  // JTM_MONTE_CARLO_HPP
