// Command-line front end: run experiments from config files or built-in
// presets, expand sweeps, and solve the 1D mean-field equation.
//
// Exit codes: 0 clean, 1 usage/config error, 2 completed with warnings,
// 3 solver did not converge.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cbo/errors.hpp"
#include "cbo/harness/archive.hpp"
#include "cbo/harness/config.hpp"
#include "cbo/harness/presets.hpp"
#include "cbo/harness/runner.hpp"
#include "cbo/version.hpp"

namespace {

using namespace cbo;
using namespace cbo::harness;

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::int64_t> samples;
  std::optional<std::int64_t> particles;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<double> sigma;
  std::optional<double> dt;
  std::optional<double> final_time;
  std::optional<int> workers;
  bool full = false;
};

// One unit of work: a config plus the preset's full-scale M when it came from
// a preset.
struct Job {
  ExperimentConfig config;
  std::optional<std::int64_t> full_samples;
};

std::vector<Job> resolve_target(const std::string& target) {
  if (std::filesystem::exists(target)) return {{load_config_file(target), std::nullopt}};
  if (const Preset* p = find_preset(target)) return {{p->config, p->full_samples}};
  if (const PresetGroup* g = find_preset_group(target)) {
    std::vector<Job> jobs;
    for (const std::string& member : g->members) {
      const Preset* p = find_preset(member);
      if (!p) throw ConfigError("group \"" + target + "\" names unknown preset \"" + member + "\"");
      jobs.push_back({p->config, p->full_samples});
    }
    return jobs;
  }
  throw ConfigError("\"" + target + "\" is neither a config file nor a preset (see `cbo presets`)");
}

void apply_overrides(Job& job, const Overrides& ov, bool grouped) {
  ExperimentConfig& cfg = job.config;
  if (ov.full) {
    if (job.full_samples)
      cfg.num_samples = *job.full_samples;
    else
      std::cerr << "note: --full only applies to presets; keeping M=" << cfg.num_samples << "\n";
  }
  if (ov.samples) cfg.num_samples = *ov.samples;
  if (ov.particles) cfg.num_particles = *ov.particles;
  if (ov.seed) cfg.seed_base = *ov.seed;
  if (ov.alpha) cfg.cbo.alpha = *ov.alpha;
  if (ov.sigma) cfg.cbo.sigma = *ov.sigma;
  if (ov.dt) cfg.cbo.dt = *ov.dt;
  if (ov.final_time) cfg.final_time = *ov.final_time;
  if (ov.out) cfg.outputs = grouped ? *ov.out + "/" + cfg.name : *ov.out;
  if (ov.workers) {
#ifdef _WIN32
    _putenv_s("CBO_WORKERS", std::to_string(*ov.workers).c_str());
#else
    setenv("CBO_WORKERS", std::to_string(*ov.workers).c_str(), 1);
#endif
  }
}

void report(const ResultArchive& a) {
  std::printf("[%s]", a.config.name.c_str());
  if (!a.runs.empty()) {
    std::printf(" M=%zu success=%.1f%% mean_sq_dist=%.3e diverged=%zu", a.stats.num_samples,
                100.0 * a.stats.success_rate, a.stats.mean_sq_dist, a.stats.num_diverged);
  }
  if (a.meanfield) {
    std::printf(" meanfield: stop_time=%.4g iters=%ld", a.meanfield->stop_time,
                a.meanfield->iterations);
    if (a.meanfield->support)
      std::printf(" support=[%.4g, %.4g]", a.meanfield->support->first,
                  a.meanfield->support->second);
  }
  std::printf(" -> %s\n", a.config.outputs.c_str());
  for (const std::string& w : a.warnings) std::printf("  warning: %s\n", w.c_str());
  std::fflush(stdout);
}

int run_jobs(std::vector<Job> jobs, const Overrides& ov, bool force_meanfield, bool require_sweep) {
  int status = 0;
  const bool grouped = jobs.size() > 1;
  for (Job& job : jobs) {
    apply_overrides(job, ov, grouped);
    if (require_sweep && !job.config.sweep)
      throw ConfigError("\"" + job.config.name + "\" has no sweep block; use `run` instead");
    if (force_meanfield) {
      ResultArchive a = run_meanfield(job.config);
      report(a);
      status = std::max(status, a.status);
    } else {
      for (const ResultArchive& a : run_sweep(job.config)) {
        report(a);
        status = std::max(status, a.status);
      }
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consensus-based optimization toolkit"};
  app.set_version_flag("--version", std::string(version_string));
  app.require_subcommand(1);

  std::string target;
  std::string describe_name;
  Overrides ov;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("target", target, "config file, preset name, or preset group")->required();
    sub->add_flag("--full", ov.full, "use the preset's publication-scale sample count");
    sub->add_option("--out", ov.out, "output directory (overrides the config)");
    sub->add_option("-M,--samples", ov.samples, "number of independent runs");
    sub->add_option("-N,--particles", ov.particles, "ensemble size");
    sub->add_option("--seed", ov.seed, "seed base (run k uses seed_base + k)");
    sub->add_option("--alpha", ov.alpha, "Gibbs weight exponent");
    sub->add_option("--sigma", ov.sigma, "noise strength");
    sub->add_option("--dt", ov.dt, "time step");
    sub->add_option("-T,--final-time", ov.final_time, "integration horizon");
    sub->add_option("--workers", ov.workers, "sample-loop worker threads");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "run an experiment (expands sweeps)");
  add_common(cmd_run);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(cmd_sweep);
  CLI::App* cmd_meanfield =
      app.add_subcommand("meanfield", "solve the 1D mean-field equation only");
  add_common(cmd_meanfield);
  CLI::App* cmd_presets = app.add_subcommand("presets", "list built-in presets and groups");
  CLI::App* cmd_describe = app.add_subcommand("describe", "show a preset's full config");
  cmd_describe->add_option("name", describe_name, "preset or group name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_presets->parsed()) {
      std::cout << cbo::harness::list_presets_text();
      return 0;
    }
    if (cmd_describe->parsed()) {
      std::cout << describe_preset_text(describe_name);
      return 0;
    }
    std::vector<Job> jobs = resolve_target(target);
    return run_jobs(std::move(jobs), ov, cmd_meanfield->parsed(), cmd_sweep->parsed());
  } catch (const cbo::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cbo::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
