#include "cbo/harness/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cbo/diagnostics.hpp"
#include "cbo/errors.hpp"
#include "cbo/meanfield.hpp"
#include "cbo/particle_dynamics.hpp"
#include "cbo/version.hpp"

namespace cbo::harness {

namespace fs = std::filesystem;

CountingObjective::CountingObjective(Objective inner)
    : counter_(std::make_shared<std::atomic<std::uint64_t>>(0)), wrapped_(inner) {
  wrapped_.eval = [eval = std::move(inner.eval), c = counter_](std::span<const double> x) {
    c->fetch_add(1, std::memory_order_relaxed);
    return eval(x);
  };
}

int worker_count() {
  if (const char* env = std::getenv("CBO_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

std::string num_token(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.num_particles < 1) throw ConfigError("N must be >= 1");
  if (cfg.num_samples < 1) throw ConfigError("M must be >= 1");
  if (!(cfg.final_time >= 0.0)) throw ConfigError("T must be >= 0");
  if (!(cfg.cbo.dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(cfg.cbo.alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(cfg.cbo.sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  if (!(cfg.cbo.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
}

void run_particle_samples(const ExperimentConfig& cfg, const Objective& f, ResultArchive& a) {
  const long long m = cfg.num_samples;
  a.runs.assign(static_cast<std::size_t>(m), RunRecord{});
  const int workers = worker_count();
  std::exception_ptr first_error = nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#else
  (void)workers;
#endif
  for (long long k = 0; k < m; ++k) {
    const std::uint64_t seed = cfg.seed_base + static_cast<std::uint64_t>(k);
    try {
      a.runs[static_cast<std::size_t>(k)] =
          run_trajectory(cfg.init, static_cast<std::size_t>(cfg.num_particles), cfg.cbo, f,
                         cfg.final_time, seed, cfg.trajectory);
    } catch (const DivergedRunError& e) {
      RunRecord r;
      r.seed = seed;
      r.diverged = true;
      r.diverged_step = e.step();
      a.runs[static_cast<std::size_t>(k)] = std::move(r);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  a.stats = aggregate(a.runs);
  if (a.stats.num_diverged * 10 > a.stats.num_samples) {
    a.status = 2;
    a.warnings.push_back("more than 10% of samples diverged (" +
                         std::to_string(a.stats.num_diverged) + " of " +
                         std::to_string(a.stats.num_samples) + ")");
  }
}

DensityField1D initial_density(const ExperimentConfig& cfg) {
  const MeanfieldParams& mp = cfg.meanfield;
  if (cfg.init.lower.empty() || cfg.init.upper.empty())
    throw ConfigError("init bounds are required for the mean-field start");
  const double a0 = cfg.init.lower.front();
  const double b0 = cfg.init.upper.front();
  if (!(a0 < b0)) throw ConfigError("init box must have positive width");
  if (a0 < mp.domain_a - 1e-12 || b0 > mp.domain_b + 1e-12)
    throw ConfigError("init box must lie inside the mean-field domain");
  if (a0 == mp.domain_a && b0 == mp.domain_b)
    return DensityField1D::uniform(mp.domain_a, mp.domain_b, mp.num_cells, mp.poly_degree);
  const double height = 1.0 / (b0 - a0);
  return DensityField1D::project(mp.domain_a, mp.domain_b, mp.num_cells, mp.poly_degree,
                                 [&](double x) { return (x >= a0 && x <= b0) ? height : 0.0; });
}

void run_meanfield_part(const ExperimentConfig& cfg, const Objective& f, ResultArchive& a) {
  if (cfg.benchmark.dim != 1)
    throw ConfigError("mean-field mode needs benchmark.dim == 1, got " +
                      std::to_string(cfg.benchmark.dim));
  const DensityField1D rho0 = initial_density(cfg);
  a.meanfield = solve_to_stationarity(rho0, f, cfg.cbo, cfg.meanfield_tol, cfg.meanfield);
  if (!a.meanfield->warnings.empty()) {
    a.status = std::max(a.status, 2);
    for (const std::string& w : a.meanfield->warnings) a.warnings.push_back("meanfield: " + w);
  }
}

}  // namespace

ResultArchive run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ResultArchive a;
  a.config = cfg;
  a.tool_version = version_string;
  CountingObjective counting(make_objective(cfg.benchmark));

  if (cfg.mode != RunMode::MeanField1D) run_particle_samples(cfg, counting.objective(), a);
  try {
    if (cfg.mode != RunMode::Particles) run_meanfield_part(cfg, counting.objective(), a);
  } catch (const ConvergenceError& e) {
    // Keep what we have on disk, then let the caller see the failure.
    a.status = 3;
    a.warnings.push_back(std::string("meanfield failed: ") + e.what());
    a.objective_evaluations = counting.count();
    write_archive(a, cfg.outputs);
    throw;
  }
  a.objective_evaluations = counting.count();
  write_archive(a, cfg.outputs);
  return a;
}

ResultArchive run_meanfield(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.mode = RunMode::MeanField1D;
  return run_experiment(c);
}

namespace {

struct Cell {
  ExperimentConfig config;
  std::int64_t n = 0;
  double alpha = 0.0;
  double shift = 0.0;
};

std::vector<Cell> expand_sweep(const ExperimentConfig& cfg) {
  const SweepSpec& s = *cfg.sweep;
  const std::vector<std::int64_t> ns =
      s.num_particles.empty() ? std::vector<std::int64_t>{cfg.num_particles} : s.num_particles;
  const std::vector<double> alphas =
      s.alpha.empty() ? std::vector<double>{cfg.cbo.alpha} : s.alpha;
  const std::vector<double> shifts =
      s.shift_B.empty() ? std::vector<double>{cfg.benchmark.shift_B} : s.shift_B;

  const std::size_t total = ns.size() * alphas.size() * shifts.size();
  if (total > static_cast<std::size_t>(cfg.sweep_budget))
    throw ConfigError("sweep grid has " + std::to_string(total) + " cells, over the budget of " +
                      std::to_string(cfg.sweep_budget) + "; raise sweep_budget to proceed");

  std::vector<Cell> cells;
  cells.reserve(total);
  for (std::int64_t n : ns)
    for (double alpha : alphas)
      for (double shift : shifts) {
        Cell cell;
        cell.config = cfg;
        cell.config.sweep.reset();
        cell.n = n;
        cell.alpha = alpha;
        cell.shift = shift;
        cell.config.num_particles = n;
        cell.config.cbo.alpha = alpha;
        cell.config.benchmark.shift_B = shift;

        std::string suffix;
        if (!s.num_particles.empty()) suffix += "-N" + std::to_string(n);
        if (!s.alpha.empty()) suffix += "-alpha" + num_token(alpha);
        if (!s.shift_B.empty()) suffix += "-x" + num_token(shift);
        cell.config.name = cfg.name + suffix;
        cell.config.outputs = cfg.outputs + "/" + cfg.name + suffix;
        cells.push_back(std::move(cell));
      }
  return cells;
}

void write_sweep_summary(const ExperimentConfig& cfg, const std::vector<Cell>& cells,
                         const std::vector<ResultArchive>& archives) {
  fs::create_directories(cfg.outputs);

  {
    std::ofstream out(fs::path(cfg.outputs) / "summary.csv", std::ios::binary);
    out << "name,N,alpha,shift_B,success_rate,mean_sq_dist,num_samples,num_diverged\n";
    char buf[128];
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const SampleStatistics& st = archives[i].stats;
      std::snprintf(buf, sizeof(buf), "%.6g,%.17g,%zu,%zu", st.success_rate, st.mean_sq_dist,
                    st.num_samples, st.num_diverged);
      out << cells[i].config.name << ',' << cells[i].n << ',' << num_token(cells[i].alpha) << ','
          << num_token(cells[i].shift) << ',' << buf << '\n';
    }
  }

  // Pivot like the published tables: one block per minimizer location, the
  // swept variable across the columns, success rate and mean squared distance
  // as the two data rows.
  const SweepSpec& s = *cfg.sweep;
  const bool over_alpha = s.num_particles.empty() && !s.alpha.empty();
  std::vector<double> columns;
  if (over_alpha)
    columns = s.alpha;
  else
    for (std::int64_t n : (s.num_particles.empty() ? std::vector<std::int64_t>{cfg.num_particles}
                                                   : s.num_particles))
      columns.push_back(static_cast<double>(n));
  std::vector<double> rows = s.shift_B.empty() ? std::vector<double>{cfg.benchmark.shift_B}
                                               : s.shift_B;

  auto cell_stats = [&](double row, double col) -> const SampleStatistics* {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double key = over_alpha ? cells[i].alpha : static_cast<double>(cells[i].n);
      if (cells[i].shift == row && key == col) return &archives[i].stats;
    }
    return nullptr;
  };

  std::ofstream out(fs::path(cfg.outputs) / "table.txt", std::ios::binary);
  out << cfg.name << " (" << benchmark_family_name(cfg.benchmark.family)
      << ", d=" << cfg.benchmark.dim << ", M=" << cfg.num_samples << ")\n";
  for (double row : rows) {
    out << "\nminimizer at " << num_token(row) << ":\n";
    out << "  " << (over_alpha ? "alpha     " : "N         ");
    for (double col : columns) {
      char head[32];
      std::snprintf(head, sizeof(head), "%12s", num_token(col).c_str());
      out << head;
    }
    out << "\n  rate      ";
    for (double col : columns) {
      const SampleStatistics* st = cell_stats(row, col);
      char txt[32];
      if (st)
        std::snprintf(txt, sizeof(txt), "%11.1f%%", 100.0 * st->success_rate);
      else
        std::snprintf(txt, sizeof(txt), "%12s", "-");
      out << txt;
    }
    out << "\n  distance  ";
    for (double col : columns) {
      const SampleStatistics* st = cell_stats(row, col);
      char txt[32];
      if (st)
        std::snprintf(txt, sizeof(txt), "%12.3e", st->mean_sq_dist);
      else
        std::snprintf(txt, sizeof(txt), "%12s", "-");
      out << txt;
    }
    out << '\n';
  }
}

}  // namespace

std::vector<ResultArchive> run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  if (!cfg.sweep) return {run_experiment(cfg)};

  const std::vector<Cell> cells = expand_sweep(cfg);
  std::vector<ResultArchive> archives;
  archives.reserve(cells.size());
  for (const Cell& cell : cells) archives.push_back(run_experiment(cell.config));
  write_sweep_summary(cfg, cells, archives);
  return archives;
}

}  // namespace cbo::harness
