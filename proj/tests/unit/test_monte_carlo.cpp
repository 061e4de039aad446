#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "../support/fixtures.hpp"
#include "jtm/errors.hpp"
#include "jtm/monte_carlo.hpp"
#include "jtm/optimal_policy.hpp"
#include "jtm/telegraph_moments.hpp"

using namespace jtm;
using jtm::testing::example_market;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST(Estimator, PairwiseSumIsExactOnIntegers) {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  const auto e = summarize(std::vector<double>{1.0, 3.0});
  EXPECT_EQ(e.mean, 2.0);
  EXPECT_DOUBLE_EQ(e.std_error, 1.0);
  EXPECT_THROW(summarize(std::vector<double>{1.0}), ValidationError);
}

TEST(MonteCarlo, SymmetricTelegraphMean) {
  const auto d = MarkDistribution::point_mass(0.2);
  const MarketParams p({RegimeSpec{0.01, 0.1, 0.8, d}, RegimeSpec{0.01, 0.1, 0.8, d}}, 5.0);
  const auto e = run(p, {fn::TelegraphMean{5.0}, 50000, 0, 3, 0});
  EXPECT_LE(std::abs(e.mean - (0.1 + 0.8 * 0.2) * 5.0), 4.0 * e.std_error);
  EXPECT_EQ(e.n, 50000u);
  EXPECT_EQ(e.seed, 3u);
}

TEST(MonteCarlo, DeterministicAcrossWorkers) {
  const auto p = example_market();
  McJob job{fn::TelegraphMean{6.0}, 20000, 1, 99, 1};
  const auto a = run(p, job);
  for (unsigned w : {2u, 3u, 8u}) {
    job.workers = w;
    const auto b = run(p, job);
    EXPECT_TRUE(same_bits(a.mean, b.mean)) << "workers " << w;
    EXPECT_TRUE(same_bits(a.std_error, b.std_error));
  }
}

TEST(MonteCarlo, ReproduceAndSanity) {
  const auto p = example_market();
  McJob job{fn::TelegraphMean{6.0}, 5000, 0, 7, 2};
  const auto e = run(p, job);
  EXPECT_TRUE(reproduce(p, job, e));
  job.workers = 5;
  EXPECT_TRUE(reproduce(p, job, e));
  McJob other = job;
  other.seed = 8;
  EXPECT_NE(run(p, other).mean, e.mean);
  Estimate forged = e;
  forged.mean += 1e-12;
  EXPECT_THROW(reproduce(p, job, forged), ReproducibilityError);
}

TEST(MonteCarlo, StandardErrorScaling) {
  const auto p = example_market();
  std::vector<double> se;
  for (std::uint64_t n : {10000u, 40000u, 160000u}) {
    se.push_back(run(p, {fn::TelegraphMean{5.0}, n, 0, 1234, 0}).std_error);
  }
  EXPECT_NEAR(se[0] / se[1], 2.0, 0.4);
  EXPECT_NEAR(se[1] / se[2], 2.0, 0.4);
}

TEST(MonteCarlo, CoverageOfClosedForm) {
  const auto p = example_market();
  const double exact = mean(return_spec(p), 5.0, 0);
  int covered = 0;
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const auto e = run(p, {fn::TelegraphMean{5.0}, 4000, 0, 1000 + rep, 0});
    if (std::abs(e.mean - exact) <= 2.0 * e.std_error) ++covered;
  }
  EXPECT_GE(covered, 43);
}

TEST(MonteCarlo, DensityOfLogTiltHasUnitMean) {
  const auto p = jtm::testing::with_log_targets(example_market(1.0, 2.0, 0.0, 0.0, 5.0), {0.5, 0.5});
  const auto tilt = TiltSpec::log(p, {0.5, 0.5});
  const auto e = run(p, {fn::ZTerminal{tilt}, 100000, 0, 5, 0});
  EXPECT_LE(std::abs(e.mean - 1.0), 4.0 * e.std_error);
}

TEST(MonteCarlo, PathViolationsCarryIndexAndSeed) {
  const auto p = example_market();
  const fn::Custom failing{"fails", [](const RegimePath&) -> double {
                             throw ModelViolation("synthetic");
                           }};
  try {
    run(p, {failing, 500, 0, 42, 3});
    FAIL() << "expected PathError";
  } catch (const PathError& e) {
    EXPECT_EQ(e.path_index(), 0u);
    EXPECT_EQ(e.seed(), 42u);
  }
}

TEST(MonteCarlo, LowestFailingIndexWins) {
  const auto p = example_market();
  // fails exactly on paths with at least 9 events; the first such index is
  // found by a sequential scan and must match any parallel run
  const fn::Custom failing{"busy-paths", [](const RegimePath& path) -> double {
                             if (path.events.size() >= 9) throw ModelViolation("busy");
                             return 1.0;
                           }};
  std::uint64_t first = 0;
  while (simulate_regime_path(p, 1, 42, first).events.size() < 9) ++first;
  for (unsigned w : {1u, 4u}) {
    try {
      run(p, {failing, 5000, 1, 42, w});
      FAIL() << "expected PathError";
    } catch (const PathError& e) {
      EXPECT_EQ(e.path_index(), first);
    }
  }
}

TEST(MonteCarlo, JobValidation) {
  const auto p = example_market();
  EXPECT_THROW(run(p, {fn::TelegraphMean{1.0}, 50, 0, 1, 0}), ValidationError);
  EXPECT_THROW(run(p, {fn::TelegraphMean{11.0}, 500, 0, 1, 0}), DomainError);
  EXPECT_THROW(run(p, {fn::TelegraphMean{1.0}, 500, 2, 1, 0}), DomainError);
}

TEST(MonteCarlo, CommonRandomNumbersCancel) {
  const auto p = example_market();
  const auto e = run_difference(p, {fn::TelegraphMean{5.0}, 1000, 0, 3, 0}, fn::TelegraphMean{5.0});
  EXPECT_EQ(e.mean, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}
