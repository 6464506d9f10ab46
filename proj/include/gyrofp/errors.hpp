#pragma once

#include <stdexcept>
#include <string>

namespace gyrofp {

/// Argument outside the mathematical domain of an operation (negative radius, non-finite input, T <= 0).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Array sizes that do not match the grid or truncation they are used with.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid configuration: bad parameter values, unknown keys, unusable grids.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Failure inside a numerical kernel (singular multiplier, zero pivot, NaN).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A time step larger than the advective stability limit.
class RejectedStepError : public NumericalError {
 public:
  RejectedStepError(const std::string& what, double dt, double limit)
      : NumericalError(what), dt_(dt), limit_(limit) {}
  double dt() const { return dt_; }
  double limit() const { return limit_; }

 private:
  double dt_;
  double limit_;
};

/// Corrupt, truncated or incompatible snapshot / series files.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gyrofp
