#include "jtm/root_finding.hpp"

#include <cmath>
#include <optional>
#include <utility>

#include "jtm/errors.hpp"

namespace jtm {
namespace {

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

struct Counted {
  const std::function<double(double)>& f;
  int calls = 0;
  double operator()(double x) {
    ++calls;
    return f(x);
  }
};

// Evaluates f while expanding; failures mean the boundary has been reached.
std::optional<double> probe(Counted& f, double x) {
  try {
    const double v = f(x);
    if (std::isfinite(v)) return v;
  } catch (const NumericalError&) {
  }
  return std::nullopt;
}

RootResult refine(Counted& f, double a, double fa, double b, double fb, const RootOptions& opt) {
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  int side = 0;  // which end was retained last, for the Illinois weight
  double best = std::abs(fa) < std::abs(fb) ? a : b;
  double f_best = std::abs(fa) < std::abs(fb) ? fa : fb;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double width = b - a;
    if (width <= opt.x_tol && std::abs(f_best) <= opt.f_tol) break;
    const double mid = a + 0.5 * width;
    if (mid <= a || mid >= b) break;  // adjacent doubles
    double x = (a * fb - b * fa) / (fb - fa);
    // bisect when the secant point is unusable or the bracket is stalling
    if (!(x > a && x < b) || (it % 3 == 2)) x = mid;
    const double fx = f(x);
    if (std::abs(fx) < std::abs(f_best)) {
      best = x;
      f_best = fx;
    }
    if (fx == 0.0) {
      return {x, 0.0, x, x, 0.0, 0.0, f.calls};
    }
    if (opposite(fx, fa)) {
      b = x;
      fb = fx;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = x;
      fa = fx;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  // fa/fb may carry Illinois weights; report true values at the ends
  return {best, f_best, a, b, f(a), f(b), f.calls};
}

}  // namespace

double interior_start(const Interval& domain, double guess) {
  if (guess > domain.lo && guess < domain.hi) return guess;
  const bool lo_inf = std::isinf(domain.lo), hi_inf = std::isinf(domain.hi);
  if (lo_inf && hi_inf) return 0.0;
  if (lo_inf) return domain.hi - 1.0;
  if (hi_inf) return domain.lo + 1.0;
  return domain.lo + 0.5 * (domain.hi - domain.lo);
}

RootResult refine_root(const std::function<double(double)>& f, double lo, double hi,
                       const RootOptions& options) {
  Counted fc{f};
  const double flo = fc(lo), fhi = fc(hi);
  if (flo == 0.0) return {lo, 0.0, lo, lo, 0.0, 0.0, fc.calls};
  if (fhi == 0.0) return {hi, 0.0, hi, hi, 0.0, 0.0, fc.calls};
  if (!opposite(flo, fhi)) throw NoRootError("no sign change on the bracket", lo, hi, flo, fhi);
  return refine(fc, lo, flo, hi, fhi, options);
}

RootResult find_root(const std::function<double(double)>& f, const Interval& domain, double guess,
                     const RootOptions& options) {
  if (!(domain.lo < domain.hi)) throw DomainError("empty search domain");
  Counted fc{f};
  const double x0 = interior_start(domain, guess);
  const double f0 = fc(x0);
  if (!std::isfinite(f0)) {
    throw NoRootError("function not finite at the start point", x0, x0, f0, f0);
  }
  if (f0 == 0.0) return {x0, 0.0, x0, x0, 0.0, 0.0, fc.calls};

  auto advance = [&](double x, int dir, double& step) {
    const double end = dir > 0 ? domain.hi : domain.lo;
    if (std::isinf(end)) {
      const double next = x + dir * step;
      step *= 2.0;
      return next;
    }
    return x + 0.5 * (end - x);
  };

  // Tiny steps first: a tangent or already-converged root stays put.
  if (std::abs(f0) <= options.f_tol) {
    const double h = 0.5 * options.x_tol;
    for (int dir : {1, -1}) {
      const double x = x0 + dir * h;
      if (!(x > domain.lo && x < domain.hi)) continue;
      const auto fx = probe(fc, x);
      if (fx && (*fx == 0.0 || opposite(*fx, f0))) {
        return refine(fc, x0, f0, x, *fx, options);
      }
    }
    return {x0, f0, x0, x0, f0, f0, fc.calls};
  }

  double lo_x = x0, lo_f = f0, hi_x = x0, hi_f = f0;
  for (int dir : {1, -1}) {
    double x = x0, fx = f0, step = 0.5;
    for (int k = 0; k < options.max_expansions; ++k) {
      const double next = advance(x, dir, step);
      if (next == x || !(next > domain.lo && next < domain.hi)) break;
      const auto fn = probe(fc, next);
      if (!fn) break;
      if (*fn == 0.0) return {next, 0.0, next, next, 0.0, 0.0, fc.calls};
      if (opposite(*fn, fx)) return refine(fc, x, fx, next, *fn, options);
      // the first step tells whether this direction approaches a root
      if (k == 0 && std::abs(*fn) > std::abs(fx)) {
        x = next;
        fx = *fn;
        break;
      }
      x = next;
      fx = *fn;
    }
    if (dir > 0) {
      hi_x = x;
      hi_f = fx;
    } else {
      lo_x = x;
      lo_f = fx;
    }
  }
  throw NoRootError("no sign change found in (" + format_double(domain.lo) + ", " +
                        format_double(domain.hi) + ")",
                    lo_x, hi_x, lo_f, hi_f);
}

}  // namespace jtm
