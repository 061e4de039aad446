#include "jtm/jump_distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "jtm/errors.hpp"

namespace jtm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double negative_power_cdf(double eta, double y) {
  if (y <= -1.0) return 0.0;
  if (y >= 0.0) return 1.0;
  return std::pow(1.0 + y, eta);
}

double positive_power_cdf(double eta, double y) {
  if (y <= 0.0) return 0.0;
  if (std::isinf(y)) return 1.0;
  return -std::expm1(-eta * std::log1p(y));
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DivergenceError(std::string(what) + " is not finite", x);
}

}  // namespace

bool Interval::contains(double x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

MarkDistribution::MarkDistribution(Kind kind) : kind_(std::move(kind)) {
  std::visit(
      Overloaded{
          [](const NegativePower& d) {
            if (!(d.eta > 0.0) || !std::isfinite(d.eta)) {
              throw ValidationError("negative_power: eta must be positive and finite");
            }
          },
          [](const PositivePower& d) {
            if (!(d.eta > 1.0) || !std::isfinite(d.eta)) {
              throw ValidationError("positive_power: eta must exceed 1 (finite mean)");
            }
          },
          [](const PointMass& d) {
            if (!std::isfinite(d.y)) throw ValidationError("point_mass: y must be finite");
          },
          [](const Discrete& d) {
            if (d.values.empty() || d.values.size() != d.probabilities.size()) {
              throw ValidationError("discrete: values and probabilities must be non-empty and of equal length");
            }
            double total = 0.0;
            for (std::size_t k = 0; k < d.values.size(); ++k) {
              if (!std::isfinite(d.values[k])) throw ValidationError("discrete: values must be finite");
              if (!(d.probabilities[k] > 0.0)) throw ValidationError("discrete: probabilities must be positive");
              total += d.probabilities[k];
            }
            if (std::abs(total - 1.0) > 1e-12) {
              throw ValidationError("discrete: probabilities must sum to 1 (got " + format_double(total) + ")");
            }
          }},
      kind_);
}

bool MarkDistribution::is_continuous() const {
  return std::holds_alternative<NegativePower>(kind_) || std::holds_alternative<PositivePower>(kind_);
}

Interval MarkDistribution::support() const {
  return std::visit(
      Overloaded{[](const NegativePower&) { return Interval{-1.0, 0.0, false, false}; },
                 [](const PositivePower&) { return Interval{0.0, kInf, false, false}; },
                 [](const PointMass& d) { return Interval{d.y, d.y, true, true}; },
                 [](const Discrete& d) {
                   const auto [lo, hi] = std::minmax_element(d.values.begin(), d.values.end());
                   return Interval{*lo, *hi, true, true};
                 }},
      kind_);
}

std::string MarkDistribution::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{[&](const NegativePower& d) { os << "negative_power(eta=" << format_double(d.eta) << ")"; },
                        [&](const PositivePower& d) { os << "positive_power(eta=" << format_double(d.eta) << ")"; },
                        [&](const PointMass& d) { os << "point_mass(y=" << format_double(d.y) << ")"; },
                        [&](const Discrete& d) { os << "discrete(" << d.values.size() << " atoms)"; }},
             kind_);
  return os.str();
}

namespace {

// y = e^{-v} - 1 rounds to -1 once v > 37; keep marks inside the open support.
double downward_mark(double v) {
  const double y = std::expm1(-v);
  return y > -1.0 ? y : std::nextafter(-1.0, 0.0);
}

}  // namespace

double MarkDistribution::sample(RandomStream& rng) const {
  return std::visit(
      Overloaded{[&](const NegativePower& d) { return downward_mark(rng.exponential(d.eta)); },
                 [&](const PositivePower& d) { return std::expm1(rng.exponential(d.eta)); },
                 [](const PointMass& d) { return d.y; },
                 [&](const Discrete& d) {
                   const double u = rng.uniform();
                   double cumulative = 0.0;
                   for (std::size_t k = 0; k + 1 < d.values.size(); ++k) {
                     cumulative += d.probabilities[k];
                     if (u < cumulative) return d.values[k];
                   }
                   return d.values.back();
                 }},
      kind_);
}

double MarkDistribution::probability(const MarkSet& set) const {
  if (!(set.hi > set.lo)) return 0.0;
  return std::visit(
      Overloaded{[&](const NegativePower& d) {
                   return negative_power_cdf(d.eta, set.hi) - negative_power_cdf(d.eta, set.lo);
                 },
                 [&](const PositivePower& d) {
                   return positive_power_cdf(d.eta, set.hi) - positive_power_cdf(d.eta, set.lo);
                 },
                 [&](const PointMass& d) { return set.contains(d.y) ? 1.0 : 0.0; },
                 [&](const Discrete& d) {
                   double p = 0.0;
                   for (std::size_t k = 0; k < d.values.size(); ++k) {
                     if (set.contains(d.values[k])) p += d.probabilities[k];
                   }
                   return p;
                 }},
      kind_);
}

double MarkDistribution::integrate(const std::function<double(double)>& g,
                                   const QuadratureSettings& settings) const {
  return std::visit(
      Overloaded{
          [&](const NegativePower& d) {
            return integrate_exponential_weight([&g](double v) { return g(downward_mark(v)); }, d.eta,
                                                settings)
                .value;
          },
          [&](const PositivePower& d) {
            return integrate_exponential_weight([&g](double v) { return g(std::expm1(v)); }, d.eta,
                                                settings)
                .value;
          },
          [&](const PointMass& d) {
            const double value = g(d.y);
            if (!std::isfinite(value)) throw DivergenceError("integrand is not finite at the atom", value);
            return value;
          },
          [&](const Discrete& d) {
            double total = 0.0;
            for (std::size_t k = 0; k < d.values.size(); ++k) {
              const double value = g(d.values[k]);
              if (!std::isfinite(value)) throw DivergenceError("integrand is not finite at an atom", total);
              total += d.probabilities[k] * value;
            }
            return total;
          }},
      kind_);
}

std::string JumpMap::describe() const {
  if (is_identity()) return "identity";
  return "affine(scale=" + format_double(scale_) + ", shift=" + format_double(shift_) + ")";
}

Interval JumpMap::image(const Interval& s) const {
  if (scale_ == 0.0) return {shift_, shift_, true, true};
  const double a = scale_ * s.lo + shift_;
  const double b = scale_ * s.hi + shift_;
  if (scale_ > 0.0) return {a, b, s.lo_closed, s.hi_closed};
  return {b, a, s.hi_closed, s.lo_closed};
}

void validate_jump_map(const MarkDistribution& dist, const JumpMap& map) {
  if (const auto* atoms = std::get_if<Discrete>(&dist.kind())) {
    for (double y : atoms->values) {
      const double f = map(y);
      if (!(f > -1.0) || f == 0.0) {
        throw ValidationError("jump map " + map.describe() + " sends atom " + format_double(y) +
                              " to " + format_double(f) + ", outside (-1, inf) \\ {0}");
      }
    }
    return;
  }
  const Interval image = map.image(dist.support());
  const bool lower_ok = image.lo_closed ? image.lo > -1.0 : image.lo >= -1.0;
  if (!lower_ok) {
    throw ValidationError("jump map " + map.describe() + " on " + dist.describe() +
                          " reaches " + format_double(image.lo) + " <= -1");
  }
  if (image.lo == image.hi && image.lo == 0.0) {
    throw ValidationError("jump map " + map.describe() + " on " + dist.describe() + " is identically 0");
  }
}

Interval admissible_fractions(const MarkDistribution& dist, const JumpMap& map) {
  const Interval image = map.image(dist.support());
  Interval result{-kInf, kInf, false, false};
  if (image.hi > 0.0) {
    if (std::isinf(image.hi)) {
      result.lo = 0.0;
      result.lo_closed = true;
    } else {
      result.lo = -1.0 / image.hi;
      result.lo_closed = !image.hi_closed;
    }
  }
  if (image.lo < 0.0) {
    result.hi = -1.0 / image.lo;
    result.hi_closed = !image.lo_closed;
  }
  return result;
}

double mean_jump(const MarkDistribution& dist, const JumpMap& map, const QuadratureSettings& settings) {
  const double value = dist.integrate([&map](double y) { return map(y); }, settings);
  require_finite(value, "mean jump");
  return value;
}

double exp_jump(const MarkDistribution& dist, const JumpMap& map, const QuadratureSettings& settings) {
  const double value = dist.integrate([&map](double y) { return std::exp(map(y)); }, settings);
  require_finite(value, "exponential jump moment");
  return value;
}

}  // namespace jtm
