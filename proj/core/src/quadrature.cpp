#include "jtm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "jtm/errors.hpp"

namespace jtm {
namespace {

// Kronrod abscissae (positive half, descending) and weights; every odd
// index (1, 3, 5, 7) is also a 7-point Gauss node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw DivergenceError("integrand is not finite at x = " + format_double(x), y);
  }
  return y;
}

Segment kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = checked(f, center);
  double gauss = f_center * kWg[3];
  double kronrod = f_center * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = checked(f, center - dx) + checked(f, center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw ValidationError("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw ValidationError("quadrature max_subdivisions must be >= 1");
  }
}

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSettings& settings) {
  settings.validate();
  if (a == b) return {};
  if (b < a) {
    QuadratureResult r = integrate_interval(f, b, a, settings);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  int subdivisions = 0;

  while (total_error > std::max(settings.abs_tol, settings.rel_tol * std::abs(total))) {
    if (subdivisions >= settings.max_subdivisions) {
      throw QuadratureError("quadrature did not converge within " +
                                std::to_string(settings.max_subdivisions) +
                                " subdivisions (error estimate " + format_double(total_error) + ")",
                            total, total_error);
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("quadrature interval cannot be subdivided further near x = " +
                                format_double(worst.a),
                            total, total_error);
    }
    heap.pop();
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    if (subdivisions % 64 == 0) {
      // Re-sum to limit drift from the running updates.
      std::vector<Segment> all;
      all.reserve(heap.size());
      total = 0.0;
      total_error = 0.0;
      while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
      }
      for (const auto& s : all) {
        total += s.value;
        total_error += s.error;
        heap.push(s);
      }
    }
  }
  return {total, total_error, subdivisions};
}

QuadratureResult integrate_exponential_weight(const Integrand& g, double rate,
                                              const QuadratureSettings& settings) {
  settings.validate();
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ValidationError("exponential weight rate must be positive and finite");
  }
  const Integrand weighted = [&g, rate](double v) {
    const double w = rate * std::exp(-rate * v);
    if (w == 0.0) return 0.0;
    return g(v) * w;
  };

  QuadratureSettings panel_settings = settings;
  panel_settings.abs_tol = settings.abs_tol / 8.0;

  constexpr double kMinimumReach = 64.0;
  constexpr double kDivergenceReach = 16777216.0;  // 2^24

  QuadratureResult total;
  double lo = 0.0;
  double hi = 1.0;
  int negligible_in_a_row = 0;
  while (true) {
    QuadratureResult panel;
    try {
      panel = integrate_interval(weighted, lo / rate, hi / rate, panel_settings);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string("divergent integral: ") + e.what(), total.value);
    }
    total.value += panel.value;
    total.error += panel.error;
    total.subdivisions += panel.subdivisions;

    const double scale = std::max(settings.abs_tol, settings.rel_tol * std::abs(total.value));
    negligible_in_a_row = std::abs(panel.value) <= 0.01 * scale ? negligible_in_a_row + 1 : 0;
    if (hi >= kMinimumReach && negligible_in_a_row >= 2) break;
    if (hi >= kDivergenceReach) {
      throw DivergenceError("divergent integral: partial sums still growing at v = " +
                                format_double(hi / rate) + " (partial sum " +
                                format_double(total.value) + ")",
                            total.value);
    }
    lo = hi;
    hi *= 2.0;
  }
  return total;
}

}  // namespace jtm
