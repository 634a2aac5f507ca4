#pragma once

// Experiment configurations shipped with the library (presets/*.json).

#include <string_view>
#include <vector>

namespace groenewold {

struct Preset {
  std::string_view name;
  std::string_view json;
};

const std::vector<Preset>& bundled_presets();

}  // namespace groenewold
