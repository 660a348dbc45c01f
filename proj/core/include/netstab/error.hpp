#pragma once

#include <stdexcept>
#include <string>

namespace netstab {

// Base of every error the library throws. Each subclass maps onto one
// process exit code of the command line tool (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 70; }
};

// Argument outside the domain of a model function (x <= 0, c <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 65; }
};

// g(x) <= 0: the link has no capacity left at this rate.
class CapacityExhausted : public DomainError {
 public:
  CapacityExhausted(double x, double value);
  double rate() const noexcept { return x_; }

 private:
  double x_;
};

// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 65; }
};

class OutOfRangeError : public Error {
 public:
  OutOfRangeError(double t, double lo, double hi);
  int exit_code() const noexcept override { return 65; }
};

class NoEquilibriumError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 66; }
};

class IntegrationDiverged : public Error {
 public:
  IntegrationDiverged(double t, const std::string& cause);
  double time() const noexcept { return t_; }
  int exit_code() const noexcept override { return 67; }

 private:
  double t_;
};

// Scenario file problems. line() is 0 when the error is not tied to a line
// (e.g. a missing required key or a cross-field invariant).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const noexcept { return line_; }
  int exit_code() const noexcept override { return 64; }

 private:
  int line_;
};

}  // namespace netstab
