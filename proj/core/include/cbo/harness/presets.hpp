#pragma once

#include <string>
#include <vector>

#include "cbo/harness/config.hpp"

namespace cbo::harness {

// Canned experiment configurations reproducing the benchmark study: the
// double-well illustration, the 1D benchmark panels, the W1 convergence
// study, the d=20 success-rate tables, and the expectation-series figures.
// Desk-scale sample counts keep a laptop run short; full_samples restores
// the publication-scale ensemble.
struct Preset {
  std::string name;
  std::string summary;
  ExperimentConfig config;
  std::int64_t full_samples = 0;
};

// A named bundle of presets run back to back (e.g. the four 1D panels).
struct PresetGroup {
  std::string name;
  std::string summary;
  std::vector<std::string> members;
};

const std::vector<Preset>& presets();
const std::vector<PresetGroup>& preset_groups();

const Preset* find_preset(const std::string& name);
const PresetGroup* find_preset_group(const std::string& name);

std::string list_presets_text();
// Throws ConfigError for unknown names.
std::string describe_preset_text(const std::string& name);

}  // namespace cbo::harness
