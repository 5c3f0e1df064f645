#pragma once

// Reproducible experiments, one per acceptance criterion. Shared by the CLI
// presets and the acceptance binary so both report the same numbers.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace psd::experiments {

struct Settings {
  int jobs = 1;
  std::uint64_t seed = 1;
};

struct Outcome {
  int id = 0;
  std::string name;     // preset name
  bool pass = false;
  std::string summary;  // one line, human readable
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 when the criterion has none
  nlohmann::json data;      // measured values
};

/// (preset name, criterion id), in criterion order.
const std::vector<std::pair<std::string, int>>& presets();

/// Criterion id for a preset name, or 0.
int preset_id(const std::string& name);

/// Runs criterion `id` (1..11). Throws std::out_of_range for other ids.
Outcome run(int id, const Settings& settings = {});

}  // namespace psd::experiments
