#ifndef JTM_ESTIMATOR_HPP
#define JTM_ESTIMATOR_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace jtm {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double elapsed = 0.0;  // wall seconds
};

/// Pairwise (tree) sum; the result depends only on the values, not on how
/// they were produced.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error (sample sd / sqrt n) of the values. Needs n >= 2.
Estimate summarize(std::span<const double> values, std::uint64_t seed = 0, double elapsed = 0.0);

/// Evaluates sample(i) for i in [0, n) on `workers` threads (0 = hardware
/// concurrency), storing each value at its index. A ModelViolation on path i
/// is rethrown as PathError(i, seed); with several failures the lowest index
/// wins so the report does not depend on scheduling.
std::vector<double> sample_values(std::uint64_t n, std::uint64_t seed, unsigned workers,
                                  const std::function<double(std::uint64_t)>& sample);

/// Multi-output variant: sample(i, out) writes `width` values for path i.
/// Returned row-major, n rows.
std::vector<double> sample_rows(std::uint64_t n, std::size_t width, std::uint64_t seed,
                                unsigned workers,
                                const std::function<void(std::uint64_t, std::span<double>)>& sample);

/// sample_values followed by summarize, with timing.
Estimate estimate(std::uint64_t n, std::uint64_t seed, unsigned workers,
                  const std::function<double(std::uint64_t)>& sample);

unsigned resolve_workers(unsigned workers);

}  // namespace jtm

#endif  // JTM_ESTIMATOR_HPP
