#pragma once

#include <stdexcept>
#include <string>

namespace groenewold {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Diagonal mass near the truncation edge is above tolerance: N is too small.
class TailMassExceeded : public Error {
 public:
  TailMassExceeded(double tail_mass, double tolerance);
  double tail_mass() const { return tail_mass_; }

 private:
  double tail_mass_;
};

// Doubling the Hilbert-space padding moved interior generator entries.
class GuardInsufficient : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

class ValidationFailed : public Error {
 public:
  ValidationFailed(std::string check, double residual, double tolerance);
  const std::string& check() const { return check_; }
  double residual() const { return residual_; }

 private:
  std::string check_;
  double residual_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace groenewold
