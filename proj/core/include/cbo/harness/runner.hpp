#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "cbo/harness/archive.hpp"
#include "cbo/harness/config.hpp"
#include "cbo/objective.hpp"

namespace cbo::harness {

// Wraps an objective so every evaluation bumps a shared counter. Evaluation
// counts scale with N and the step count, so they are part of the report.
class CountingObjective {
 public:
  explicit CountingObjective(Objective inner);
  const Objective& objective() const { return wrapped_; }
  std::uint64_t count() const { return counter_->load(); }

 private:
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
  Objective wrapped_;
};

// Worker pool size for the sample loop: CBO_WORKERS env var if set, else the
// OpenMP default (1 when built without OpenMP).
int worker_count();

// Runs cfg.M independent trajectories with seeds seed_base + k, aggregates,
// and (for mode meanfield1d/both) solves the mean-field equation as well.
// Writes the archive under cfg.outputs and returns it. Sample-level blow-ups
// are recorded as diverged runs; >10% diverged flags status 2.
ResultArchive run_experiment(const ExperimentConfig& cfg);

// Expands cfg.sweep into its cross product (refusing grids larger than
// cfg.sweep_budget before any run), runs every cell into a subdirectory of
// cfg.outputs, and writes summary.csv plus a pivoted table.txt there.
std::vector<ResultArchive> run_sweep(const ExperimentConfig& cfg);

// Mean-field-only convenience wrapper (forces mode meanfield1d).
ResultArchive run_meanfield(const ExperimentConfig& cfg);

}  // namespace cbo::harness
