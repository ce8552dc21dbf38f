#pragma once

#include <stdexcept>
#include <string>

namespace kbs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-finite coefficients or runaway norm growth during time stepping.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Too much mass reached the outer layer of the periodic domain.
class BoundaryContaminationError : public Error {
 public:
  BoundaryContaminationError(const std::string& what, double time,
                             double fraction)
      : Error(what), time_(time), fraction_(fraction) {}
  double time() const { return time_; }
  double fraction() const { return fraction_; }

 private:
  double time_;
  double fraction_;
};

/// Picard iteration hit its iteration cap before meeting the tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double increment)
      : Error(what), iterations_(iterations), increment_(increment) {}
  int iterations() const { return iterations_; }
  double increment() const { return increment_; }

 private:
  int iterations_;
  double increment_;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kbs
