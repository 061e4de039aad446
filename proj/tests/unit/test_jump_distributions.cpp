#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "jtm/errors.hpp"
#include "jtm/jump_distributions.hpp"

using namespace jtm;

namespace {

struct Moments {
  double mean, se;
};

Moments sample_mean(const MarkDistribution& d, const std::function<double(double)>& g, int n,
                    std::uint64_t seed) {
  RandomStream rng(seed, 0);
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = g(d.sample(rng));
    s += v;
    s2 += v * v;
  }
  const double m = s / n;
  return {m, std::sqrt((s2 / n - m * m) / (n - 1))};
}

}  // namespace

TEST(MarkDistribution, NormalizationForEveryKind) {
  const std::vector<MarkDistribution> all = {
      MarkDistribution::negative_power(0.4), MarkDistribution::negative_power(3.0),
      MarkDistribution::positive_power(1.5), MarkDistribution::positive_power(4.0),
      MarkDistribution::point_mass(0.3), MarkDistribution::discrete({-0.5, 0.2, 1.0}, {0.2, 0.5, 0.3})};
  for (const auto& d : all) {
    EXPECT_NEAR(d.integrate([](double) { return 1.0; }), 1.0, 1e-12) << d.describe();
  }
}

TEST(MarkDistribution, PowerMeansMatchAnalytic) {
  for (double eta : {0.5, 1.0, 2.0, 7.0}) {
    EXPECT_NEAR(mean_jump(MarkDistribution::negative_power(eta), JumpMap::identity()),
                -1.0 / (1.0 + eta), 1e-12);
  }
  for (double eta : {1.5, 2.0, 5.0}) {
    EXPECT_NEAR(mean_jump(MarkDistribution::positive_power(eta), JumpMap::identity()),
                1.0 / (eta - 1.0), 1e-11);
  }
  EXPECT_NEAR(mean_jump(MarkDistribution::negative_power(1.0), JumpMap::identity()), -0.5, 1e-12);
  EXPECT_NEAR(mean_jump(MarkDistribution::positive_power(2.0), JumpMap::identity()), 1.0, 1e-11);
  EXPECT_DOUBLE_EQ(mean_jump(MarkDistribution::point_mass(0.3), JumpMap::identity()), 0.3);
}

TEST(MarkDistribution, ExpJump) {
  EXPECT_DOUBLE_EQ(exp_jump(MarkDistribution::point_mass(0.3), JumpMap::identity()),
                   std::exp(0.3));
  EXPECT_NEAR(exp_jump(MarkDistribution::negative_power(1.0), JumpMap::identity()),
              1.0 - std::exp(-1.0), 1e-12);
  EXPECT_THROW(exp_jump(MarkDistribution::positive_power(2.0), JumpMap::identity()),
               DivergenceError);
}

TEST(MarkDistribution, SamplingMeans) {
  const int n = 1000000;
  const auto neg = sample_mean(MarkDistribution::negative_power(1.0), [](double y) { return y; }, n, 1);
  EXPECT_LE(std::abs(neg.mean + 0.5), 4.0 * neg.se);
  const auto pos = sample_mean(MarkDistribution::positive_power(2.0), [](double y) { return y; }, n, 2);
  EXPECT_LE(std::abs(pos.mean - 1.0), 4.0 * pos.se);
  RandomStream rng(3, 0);
  const auto pm = MarkDistribution::point_mass(0.3);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(pm.sample(rng), 0.3);
}

TEST(MarkDistribution, SecondMomentOfUpwardJumps) {
  const auto d = MarkDistribution::positive_power(3.0);
  const double q = d.integrate([](double y) { return y * y; });
  EXPECT_NEAR(q, 1.0, 1e-10);  // E[(e^V - 1)^2] with V ~ Exp(3)
  const auto mc = sample_mean(d, [](double y) { return y * y; }, 10000000, 4);
  EXPECT_LE(std::abs(mc.mean - q), 4.0 * mc.se);
}

TEST(MarkDistribution, QuadratureAgreesWithSampling) {
  const std::vector<std::pair<const char*, std::function<double(double)>>> gs = {
      {"y", [](double y) { return y; }},
      {"y^2", [](double y) { return y * y; }},
      {"ln(1+y)", [](double y) { return std::log1p(y); }},
      {"(1+y)^0.4", [](double y) { return std::pow(1.0 + y, 0.4); }}};
  const std::vector<MarkDistribution> dists = {MarkDistribution::negative_power(0.7),
                                               MarkDistribution::negative_power(2.5),
                                               MarkDistribution::positive_power(4.5)};
  std::uint64_t seed = 10;
  for (const auto& d : dists) {
    for (const auto& [name, g] : gs) {
      const double exact = d.integrate(g);
      const auto mc = sample_mean(d, g, 1000000, ++seed);
      EXPECT_LE(std::abs(mc.mean - exact), 4.0 * mc.se) << d.describe() << " g=" << name;
    }
  }
}

TEST(MarkDistribution, LogOfDownwardJumpIsExponential) {
  const double eta = 1.7;
  const auto d = MarkDistribution::negative_power(eta);
  RandomStream rng(99, 0);
  const int n = 100000;
  std::vector<double> v(n);
  for (auto& x : v) x = -std::log1p(d.sample(rng));
  std::sort(v.begin(), v.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = -std::expm1(-eta * v[i]);
    ks = std::max({ks, cdf - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - cdf});
  }
  EXPECT_LT(ks, 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST(MarkDistribution, ProbabilityOfSets) {
  const auto neg = MarkDistribution::negative_power(2.0);
  // F(y) = (1+y)^η on (-1, 0)
  EXPECT_NEAR(neg.probability({-1.0, -0.5}), 0.25, 1e-15);
  EXPECT_NEAR(neg.probability({-2.0, 5.0}), 1.0, 1e-15);
  const auto pos = MarkDistribution::positive_power(2.0);
  EXPECT_NEAR(pos.probability({0.0, 1.0}), 0.75, 1e-15);
  const auto disc = MarkDistribution::discrete({-0.5, 0.2, 1.0}, {0.2, 0.5, 0.3});
  EXPECT_NEAR(disc.probability({-0.5, 0.2}), 0.5, 1e-15);  // (lo, hi]
  EXPECT_NEAR(disc.probability({-1.0, 0.2}), 0.7, 1e-15);
  const double by_quadrature = neg.integrate([](double y) { return y > -0.3 && y <= -0.1 ? 1.0 : 0.0; });
  EXPECT_NEAR(neg.probability({-0.3, -0.1}), by_quadrature, 1e-9);
}

TEST(MarkDistribution, RejectsInvalidParameters) {
  EXPECT_THROW(MarkDistribution::negative_power(0.0), ValidationError);
  EXPECT_THROW(MarkDistribution::positive_power(1.0), ValidationError);
  EXPECT_THROW(MarkDistribution::discrete({0.1, 0.2}, {0.5, 0.4}), ValidationError);
  EXPECT_THROW(MarkDistribution::discrete({0.1, 0.2}, {1.0, 0.0}), ValidationError);
  EXPECT_THROW(validate_jump_map(MarkDistribution::point_mass(0.0), JumpMap::identity()),
               ValidationError);
  EXPECT_THROW(validate_jump_map(MarkDistribution::point_mass(-1.0), JumpMap::identity()),
               ValidationError);
  EXPECT_THROW(validate_jump_map(MarkDistribution::negative_power(1.0), JumpMap::affine(2.0, 0.0)),
               ValidationError);
  EXPECT_NO_THROW(validate_jump_map(MarkDistribution::negative_power(1.0), JumpMap::identity()));
}

TEST(MarkDistribution, AdmissibleFractions) {
  const auto neg = admissible_fractions(MarkDistribution::negative_power(1.0), JumpMap::identity());
  EXPECT_TRUE(std::isinf(neg.lo));
  EXPECT_EQ(neg.hi, 1.0);
  EXPECT_TRUE(neg.contains(1.0));
  EXPECT_FALSE(neg.contains(1.0 + 1e-12));
  const auto pos = admissible_fractions(MarkDistribution::positive_power(2.0), JumpMap::identity());
  EXPECT_EQ(pos.lo, 0.0);
  EXPECT_TRUE(pos.contains(0.0));
  EXPECT_FALSE(pos.contains(-1e-12));
  const auto pm = admissible_fractions(MarkDistribution::point_mass(0.25), JumpMap::identity());
  EXPECT_EQ(pm.lo, -4.0);
  EXPECT_FALSE(pm.contains(-4.0));
  EXPECT_TRUE(pm.contains(-3.999));
}
