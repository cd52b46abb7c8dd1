#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cbo/diagnostics.hpp"
#include "cbo/harness/config.hpp"
#include "cbo/meanfield.hpp"

namespace cbo::harness {

// Everything produced by one experiment cell, in memory.
struct ResultArchive {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  SampleStatistics stats;
  std::optional<MeanfieldResult> meanfield;
  std::uint64_t objective_evaluations = 0;
  std::string tool_version;
  std::string rng_scheme = "philox4x32-10/box-muller";
  int status = 0;  // 0 clean, 2 completed with warnings
  std::vector<std::string> warnings;
};

// Deterministic summary (no timing data): given the same config this text is
// byte-identical across runs and across worker counts.
std::string stats_json_text(const ResultArchive& archive);

// Writes the archive directory atomically: everything lands in a sibling temp
// directory first and is renamed into place, so a killed process never leaves
// a partial archive under the final path. Returns the final path.
//
// Layout: config.copy, stats.json, runs.csv (per-sample rows, includes
// wallclock), series/*.csv, and for mean-field runs series/meanfield.csv plus
// series/density.csv snapshots.
std::filesystem::path write_archive(const ResultArchive& archive,
                                    const std::filesystem::path& dir);

}  // namespace cbo::harness
