#pragma once

// Experiment driver behind groenewold-lab: validation, evolution, diagnostics
// and the CSV / PGM artifacts.

#include <iosfwd>
#include <string>
#include <vector>

#include "groenewold/config.hpp"

namespace groenewold {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitValidation = 2,
  kExitNumerics = 3,  // quadrature or truncation
};

struct RunOptions {
  std::string out_dir = ".";
  bool validate_only = false;
  std::ostream* log = nullptr;  // progress and error messages; null for silence
};

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::string> files;  // written, in order
};

// Never throws for numerical or validation failures; those map to exit codes.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options);

// Comment lines that open every CSV the run writes (without the leading "# ").
std::vector<std::string> provenance_header(const ExperimentConfig& config);

// "%.17g"
std::string format_double(double v);

}  // namespace groenewold
