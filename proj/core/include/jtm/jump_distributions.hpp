#ifndef JTM_JUMP_DISTRIBUTIONS_HPP
#define JTM_JUMP_DISTRIBUTIONS_HPP

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "jtm/quadrature.hpp"
#include "jtm/random.hpp"

namespace jtm {

/// Density eta (1+y)^(eta-1) on (-1, 0).
struct NegativePower {
  double eta;
};

/// Density eta (1+y)^-(eta+1) on (0, inf); eta > 1 so the mean is finite.
struct PositivePower {
  double eta;
};

struct PointMass {
  double y;
};

struct Discrete {
  std::vector<double> values;
  std::vector<double> probabilities;
};

/// Endpoints of a set of reals; `*_closed` marks whether the endpoint is
/// attained.
struct Interval {
  double lo;
  double hi;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double x) const;
};

/// Mark set A = (lo, hi] used for counting processes N_t(A).
struct MarkSet {
  double lo;
  double hi;
  bool contains(double y) const { return y > lo && y <= hi; }
};

/// Distribution F_i of the marks Y attached to jumps in regime i.
class MarkDistribution {
 public:
  using Kind = std::variant<NegativePower, PositivePower, PointMass, Discrete>;

  explicit MarkDistribution(Kind kind);

  static MarkDistribution negative_power(double eta) { return MarkDistribution(NegativePower{eta}); }
  static MarkDistribution positive_power(double eta) { return MarkDistribution(PositivePower{eta}); }
  static MarkDistribution point_mass(double y) { return MarkDistribution(PointMass{y}); }
  static MarkDistribution discrete(std::vector<double> values, std::vector<double> probabilities) {
    return MarkDistribution(Discrete{std::move(values), std::move(probabilities)});
  }

  const Kind& kind() const { return kind_; }
  bool is_continuous() const;
  Interval support() const;
  std::string describe() const;

  double sample(RandomStream& rng) const;

  /// F(A) for A = (lo, hi], exact.
  double probability(const MarkSet& set) const;

  /// ∫ g(y) F(dy). Continuous kinds substitute v = ∓ln(1+y), which turns the
  /// integral into an exponential-weight integral in v; atoms are summed.
  double integrate(const std::function<double(double)>& g,
                   const QuadratureSettings& settings = {}) const;

 private:
  Kind kind_;
};

/// The measurable map f_i taking a mark to a relative price jump.
class JumpMap {
 public:
  static JumpMap identity() { return JumpMap(1.0, 0.0); }
  /// f(y) = scale * y + shift; scale = 0 gives a constant jump.
  static JumpMap affine(double scale, double shift) { return JumpMap(scale, shift); }

  double operator()(double y) const { return scale_ * y + shift_; }
  bool is_identity() const { return scale_ == 1.0 && shift_ == 0.0; }
  double scale() const { return scale_; }
  double shift() const { return shift_; }
  std::string describe() const;

  /// Image of a support interval.
  Interval image(const Interval& support) const;

 private:
  JumpMap(double scale, double shift) : scale_(scale), shift_(shift) {}
  double scale_;
  double shift_;
};

/// Checks f(y) ∈ (-1, ∞) \ {0} over the support of dist.
void validate_jump_map(const MarkDistribution& dist, const JumpMap& map);

/// Set of fractions π with 1 + π f(y) > 0 for every y in the support.
Interval admissible_fractions(const MarkDistribution& dist, const JumpMap& map);

/// η := ∫ f dF. Throws DivergenceError when not finite.
double mean_jump(const MarkDistribution& dist, const JumpMap& map,
                 const QuadratureSettings& settings = {});

/// φ := ∫ e^f dF. Throws DivergenceError when not finite.
double exp_jump(const MarkDistribution& dist, const JumpMap& map,
                const QuadratureSettings& settings = {});

}  // namespace jtm

#endif  // JTM_JUMP_DISTRIBUTIONS_HPP
