#ifndef JTM_ROOT_FINDING_HPP
#define JTM_ROOT_FINDING_HPP

#include <functional>

#include "jtm/jump_distributions.hpp"

namespace jtm {

struct RootOptions {
  double f_tol = 1e-10;
  double x_tol = 1e-12;
  int max_expansions = 200;
  int max_iterations = 400;
};

struct RootResult {
  double root = 0.0;
  double f_root = 0.0;
  // final bracket; lo == hi when an exact or tangent zero was hit
  double lo = 0.0, hi = 0.0;
  double f_lo = 0.0, f_hi = 0.0;
  int evaluations = 0;
};

/// Root of a monotone function on the open interior of `domain`.
///
/// Starting from `guess`, the search walks in the direction where |f|
/// shrinks: doubling steps toward an infinite end, halving the distance to a
/// finite one. The bracket is then refined with Illinois steps safeguarded by
/// bisection. A numerical failure while expanding counts as hitting the
/// domain boundary. Throws NoRootError carrying f at both explored ends.
RootResult find_root(const std::function<double(double)>& f, const Interval& domain, double guess,
                     const RootOptions& options = {});

/// Refines a known sign change on [lo, hi].
RootResult refine_root(const std::function<double(double)>& f, double lo, double hi,
                       const RootOptions& options = {});

/// A point strictly inside `domain`, preferring `guess`.
double interior_start(const Interval& domain, double guess);

}  // namespace jtm

#endif  // JTM_ROOT_FINDING_HPP
