#include "jtm/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "jtm/errors.hpp"

namespace jtm {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate summarize(std::span<const double> values, std::uint64_t seed, double elapsed) {
  const std::size_t n = values.size();
  if (n < 2) throw ValidationError("an estimate needs at least two samples");
  const double mean = pairwise_sum(values) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n, seed, elapsed};
}

unsigned resolve_workers(unsigned workers) {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> sample_rows(std::uint64_t n, std::size_t width, std::uint64_t seed,
                                unsigned workers,
                                const std::function<void(std::uint64_t, std::span<double>)>& sample) {
  std::vector<double> out(n * width);
  const unsigned w = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers),
                                                                   std::max<std::uint64_t>(n, 1)));
  struct Failure {
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
    std::exception_ptr error;
  };
  std::vector<Failure> failures(w);

  auto chunk = [&](unsigned k) {
    const std::uint64_t begin = n * k / w, end = n * (k + 1) / w;
    for (std::uint64_t i = begin; i < end; ++i) {
      try {
        sample(i, std::span<double>(out.data() + i * width, width));
      } catch (const ModelViolation& e) {
        failures[k] = {i, std::make_exception_ptr(
                              PathError(std::string(e.what()) + " (path " + std::to_string(i) +
                                            ", seed " + std::to_string(seed) + ")",
                                        i, seed))};
        return;
      } catch (...) {
        failures[k] = {i, std::current_exception()};
        return;
      }
    }
  };

  if (w == 1) {
    chunk(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (unsigned k = 0; k < w; ++k) threads.emplace_back(chunk, k);
    for (auto& t : threads) t.join();
  }
  // Chunks are ordered by index, so the first failing chunk holds the lowest index.
  for (const auto& f : failures) {
    if (f.error) std::rethrow_exception(f.error);
  }
  return out;
}

std::vector<double> sample_values(std::uint64_t n, std::uint64_t seed, unsigned workers,
                                  const std::function<double(std::uint64_t)>& sample) {
  return sample_rows(n, 1, seed, workers,
                     [&sample](std::uint64_t i, std::span<double> row) { row[0] = sample(i); });
}

Estimate estimate(std::uint64_t n, std::uint64_t seed, unsigned workers,
                  const std::function<double(std::uint64_t)>& sample) {
  const auto start = std::chrono::steady_clock::now();
  const auto values = sample_values(n, seed, workers, sample);
  Estimate e = summarize(values, seed);
  e.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return e;
}

}  // namespace jtm
