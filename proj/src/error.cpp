#include "groenewold/error.hpp"

#include <cstdio>

namespace groenewold {

namespace {

std::string format_residual(const char* prefix, const std::string& what, double value,
                            double tolerance) {
  char buffer[160];
  std::snprintf(buffer, sizeof buffer, "%s%s: %.3e exceeds %.3e", prefix, what.c_str(), value,
                tolerance);
  return buffer;
}

}  // namespace

TailMassExceeded::TailMassExceeded(double tail_mass, double tolerance)
    : Error(format_residual("", "tail mass", tail_mass, tolerance)), tail_mass_(tail_mass) {}

ValidationFailed::ValidationFailed(std::string check, double residual, double tolerance)
    : Error(format_residual("validation failed: ", check, residual, tolerance)),
      check_(std::move(check)),
      residual_(residual) {}

}  // namespace groenewold
