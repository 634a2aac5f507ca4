#pragma once

// Experiment configuration: a JSON document, optionally layered on a bundled
// preset by JSON merge patch. Unknown keys are rejected and every schema error
// names the file (or preset) and line it comes from.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "groenewold/generators.hpp"
#include "groenewold/model.hpp"
#include "groenewold/render.hpp"
#include "groenewold/states.hpp"

namespace groenewold {

struct FieldSpec {
  PhaseGrid grid;
  std::vector<double> times;  // ascending, duplicates removed
  bool whorl = false;         // classical density from the flow
  bool wigner = false;        // symbol of each evolved matrix
};

struct ExperimentConfig {
  std::string name;
  ModelSpec model;
  GaussianState state;
  bool coherent = false;  // start from |alpha0><alpha0| instead of the Groenewold matrix
  TruncationOptions truncation;
  std::vector<Dynamics> dynamics;
  double t0 = 0.0;
  double t1 = 0.0;
  int steps = 0;

  bool moments = true;
  int spectrum_k = 0;  // 0 disables spectrum.csv
  bool negativity = false;
  std::optional<FieldSpec> field;
  bool validate = true;
  int validate_nu_max = 4;

  nlohmann::json resolved;  // merged document the run was built from
  std::string hash;         // FNV-1a of resolved.dump(), 16 hex digits

  std::vector<double> times() const;
};

// Evaluates the small expression language allowed for numeric fields given as
// strings: + - * / ^, parentheses, pi, sqrt(). Throws ConfigError.
double evaluate_expression(std::string_view text);

// Resolves preset (may be empty) and the document text (may be empty) into a
// validated configuration. origin labels the text in error messages.
ExperimentConfig parse_config(std::string_view text, std::string_view origin,
                              std::string_view preset = {});

// Reads path (may be empty when a preset is given).
ExperimentConfig load_config(const std::string& path, std::string_view preset = {});

std::optional<std::string_view> find_preset(std::string_view name);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace groenewold
