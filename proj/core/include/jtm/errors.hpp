#ifndef JTM_ERRORS_HPP
#define JTM_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jtm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters or configuration violate a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (e.g. t outside [0, T]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A realized path breaks a model assumption (jump factor <= 0, tilt 0 or inf).
class ModelViolation : public Error {
 public:
  using Error::Error;
};

class BankruptcyError : public ModelViolation {
 public:
  using ModelViolation::ModelViolation;
};

class RuinError : public ModelViolation {
 public:
  using ModelViolation::ModelViolation;
};

/// Base for numerical failures: quadrature, divergence, missing roots.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : NumericalError(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const { return estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, double partial_sum)
      : NumericalError(what), partial_sum_(partial_sum) {}
  double partial_sum() const { return partial_sum_; }

 private:
  double partial_sum_;
};

class NoRootError : public NumericalError {
 public:
  NoRootError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
      : NumericalError(what), lo_(lo), hi_(hi), f_lo_(f_lo), f_hi_(f_hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double f_lo() const { return f_lo_; }
  double f_hi() const { return f_hi_; }

 private:
  double lo_, hi_, f_lo_, f_hi_;
};

/// A Monte Carlo path raised a model violation; carries the offending path.
class PathError : public ModelViolation {
 public:
  PathError(const std::string& what, std::uint64_t path_index, std::uint64_t seed)
      : ModelViolation(what), path_index_(path_index), seed_(seed) {}
  std::uint64_t path_index() const { return path_index_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t path_index_;
  std::uint64_t seed_;
};

class ReproducibilityError : public Error {
 public:
  ReproducibilityError(const std::string& what, double first, double second)
      : Error(what), first_(first), second_(second) {}
  double first() const { return first_; }
  double second() const { return second_; }

 private:
  double first_, second_;
};

// Formats a double with 17 significant digits, locale independent.
std::string format_double(double value);

}  // namespace jtm

#endif  // JTM_ERRORS_HPP
