#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cbo/meanfield.hpp"
#include "cbo/objective.hpp"
#include "cbo/particle_dynamics.hpp"

namespace cbo::harness {

enum class RunMode { Particles, MeanField1D, Both };

// Optional grid of values to cross (empty lists are not swept).
struct SweepSpec {
  std::vector<std::int64_t> num_particles;  // N
  std::vector<double> alpha;
  std::vector<double> shift_B;
};

struct ExperimentConfig {
  std::string name = "experiment";
  BenchmarkSpec benchmark;
  CboParams cbo;
  InitDistribution init{InitKind::UniformBox, {-3.0}, {3.0}};
  std::int64_t num_particles = 50;  // N
  std::int64_t num_samples = 100;   // M
  double final_time = 80.0;         // T
  std::uint64_t seed_base = 20170001;
  RunMode mode = RunMode::Particles;
  std::string outputs = "results/experiment";
  TrajectoryOptions trajectory;
  MeanfieldParams meanfield;
  double meanfield_tol = 1e-3;
  std::optional<SweepSpec> sweep;
  std::int64_t sweep_budget = 64;  // refuse larger grids before running
};

// JSON <-> config. Parsing rejects unknown keys; serialization is canonical
// (sorted keys, two-space indent, trailing newline), so
// parse -> serialize -> parse -> serialize is byte-stable.
ExperimentConfig parse_config(const std::string& json_text);
std::string canonical_config_text(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Enum spellings shared by config files and the CLI.
std::string run_mode_name(RunMode mode);
RunMode run_mode_from_name(const std::string& name);

}  // namespace cbo::harness
