#include "cbo/harness/presets.hpp"

#include <sstream>

#include "cbo/errors.hpp"

namespace cbo::harness {

namespace {

ExperimentConfig base_1d(BenchmarkFamily family, double shift_B, double shift_C,
                         const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.benchmark = BenchmarkSpec{family, shift_B, shift_C, 1};
  c.cbo.lambda = 1.0;
  c.cbo.sigma = 0.7;
  c.cbo.alpha = 40.0;
  c.cbo.dt = 0.1;
  c.init = InitDistribution{InitKind::UniformBox, {-3.0}, {3.0}};
  c.num_particles = 50;
  c.num_samples = 100;
  c.final_time = 80.0;
  c.trajectory.series_stride = 10;
  c.meanfield.domain_a = -3.0;
  c.meanfield.domain_b = 3.0;
  c.meanfield.num_cells = 600;  // h = 1e-2
  c.meanfield.poly_degree = 1;
  c.meanfield_tol = 1e-3;
  c.outputs = "results/" + name;
  return c;
}

ExperimentConfig base_d20(BenchmarkFamily family, const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.benchmark = BenchmarkSpec{family, 0.0, 0.0, 20};
  c.cbo.lambda = 1.0;
  c.cbo.sigma = 5.0;
  c.cbo.alpha = 30.0;
  c.cbo.dt = 0.01;
  // At sigma=5, d=20 the isotropic |x - v_f| amplification blows up in a few
  // steps; the tables are only reachable with per-coordinate noise.
  c.cbo.noise_mode = NoiseMode::Componentwise;
  c.init = InitDistribution{InitKind::UniformBox, {-3.0}, {3.0}};
  c.num_particles = 100;
  c.num_samples = 100;
  c.final_time = 10.0;
  c.trajectory.series_stride = 10;
  c.outputs = "results/" + name;
  return c;
}

std::string itos(double v) { return std::to_string(static_cast<long long>(v)); }

void add_table_cells(std::vector<Preset>& out, const std::string& table,
                     BenchmarkFamily family, bool sweep_alpha) {
  const std::vector<double> shifts = {0.0, 1.0, 2.0};
  const std::vector<double> alphas = {10.0, 20.0, 30.0, 40.0, 50.0};
  const std::vector<std::int64_t> sizes = {50, 100, 200};

  // The sweep preset producing the whole table at once.
  {
    ExperimentConfig c = base_d20(family, table);
    SweepSpec sweep;
    sweep.shift_B = shifts;
    if (sweep_alpha) {
      c.num_particles = 100;
      sweep.alpha = alphas;
    } else {
      sweep.num_particles = sizes;
    }
    c.sweep = sweep;
    std::string what = sweep_alpha ? "alpha in {10..50}" : "N in {50,100,200}";
    out.push_back({table,
                   "d=20 " + std::string(benchmark_family_name(family)) + " success-rate table, " +
                       what + " x shift in {0,1,2}",
                   c, 1000});
  }

  // One preset per cell, for running a single table entry.
  if (sweep_alpha) {
    for (double a : alphas)
      for (double b : shifts) {
        const std::string name = table + "-alpha" + itos(a) + "-x" + itos(b);
        ExperimentConfig c = base_d20(family, name);
        c.num_particles = 100;
        c.cbo.alpha = a;
        c.benchmark.shift_B = b;
        c.outputs = "results/" + name;
        out.push_back({name,
                       std::string(benchmark_family_name(family)) + " d=20, alpha=" + itos(a) +
                           ", minimizer at " + itos(b),
                       c, 1000});
      }
  } else {
    for (std::int64_t n : sizes)
      for (double b : shifts) {
        const std::string name = table + "-N" + std::to_string(n) + "-x" + itos(b);
        ExperimentConfig c = base_d20(family, name);
        c.num_particles = n;
        c.benchmark.shift_B = b;
        c.outputs = "results/" + name;
        out.push_back({name,
                       std::string(benchmark_family_name(family)) + " d=20, N=" +
                           std::to_string(n) + ", minimizer at " + itos(b),
                       c, 1000});
      }
  }
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  {
    ExperimentConfig c = base_1d(BenchmarkFamily::DoubleWell, 0.0, 0.0, "fig1-double-well");
    out.push_back({c.name, "asymmetric double well, stochastic dynamics (sigma=0.7)", c, 500});
    ExperimentConfig d = base_1d(BenchmarkFamily::DoubleWell, 0.0, 0.0, "fig1-double-well-det");
    d.cbo.sigma = 0.0;
    out.push_back({d.name, "asymmetric double well, deterministic dynamics (sigma=0)", d, 500});
  }

  struct Panel {
    const char* name;
    BenchmarkFamily family;
    double shift_B, shift_C;
  };
  const Panel panels[] = {
      {"fig3-ackley", BenchmarkFamily::Ackley, 0.0, 0.0},
      {"fig3-ackley-shifted", BenchmarkFamily::Ackley, 2.0, 5.0},
      {"fig3-rastrigin", BenchmarkFamily::Rastrigin, 0.0, 0.0},
      {"fig3-rastrigin-shifted", BenchmarkFamily::Rastrigin, 2.0, 5.0},
  };
  for (const Panel& p : panels) {
    ExperimentConfig c = base_1d(p.family, p.shift_B, p.shift_C, p.name);
    c.mode = RunMode::Both;  // particle ensemble plus the mean-field limit
    std::ostringstream s;
    s << "1D " << benchmark_family_name(p.family) << " benchmark (minimizer at " << p.shift_B
      << "), particles + mean-field";
    out.push_back({c.name, s.str(), c, 500});
  }

  for (std::int64_t n : {std::int64_t{100}, std::int64_t{1000}}) {
    const std::string name = "fig4-w1-N" + std::to_string(n);
    ExperimentConfig c = base_1d(BenchmarkFamily::Ackley, 0.0, 1.0, name);
    c.init = InitDistribution{InitKind::Equidistant1D, {-3.0}, {1.0}};
    c.num_particles = n;
    c.num_samples = 200;
    c.final_time = 20.0;
    c.trajectory.series_stride = 1;
    c.trajectory.record_w1 = true;
    out.push_back({name,
                   "W1 distance to the minimizer over time, N=" + std::to_string(n) +
                       " equidistant start on [-3,1]",
                   c, 1000});
  }

  add_table_cells(out, "table1", BenchmarkFamily::Ackley, /*sweep_alpha=*/false);
  add_table_cells(out, "table2", BenchmarkFamily::Rastrigin, /*sweep_alpha=*/false);
  add_table_cells(out, "table3", BenchmarkFamily::Ackley, /*sweep_alpha=*/true);
  add_table_cells(out, "table4", BenchmarkFamily::Rastrigin, /*sweep_alpha=*/true);

  for (BenchmarkFamily fam : {BenchmarkFamily::Ackley, BenchmarkFamily::Rastrigin}) {
    const std::string fname = benchmark_family_name(fam);
    {
      const std::string name = "fig5-" + fname;
      ExperimentConfig c = base_d20(fam, name);
      c.trajectory.series_stride = 1;
      SweepSpec sweep;
      sweep.num_particles = {50, 100, 200};
      c.sweep = sweep;
      out.push_back({name, "d=20 " + fname + " distance expectation over time, N sweep", c, 1000});
    }
    {
      const std::string name = "fig6-" + fname;
      ExperimentConfig c = base_d20(fam, name);
      c.trajectory.series_stride = 1;
      SweepSpec sweep;
      sweep.alpha = {10.0, 20.0, 30.0, 40.0, 50.0};
      c.sweep = sweep;
      out.push_back(
          {name, "d=20 " + fname + " distance expectation over time, alpha sweep", c, 1000});
    }
  }

  return out;
}

std::vector<PresetGroup> build_groups() {
  return {
      {"fig1-comparison",
       "double-well illustration, deterministic vs stochastic",
       {"fig1-double-well-det", "fig1-double-well"}},
      {"fig3-benchmarks-1d",
       "all four 1D benchmark panels (particles + mean-field)",
       {"fig3-ackley", "fig3-ackley-shifted", "fig3-rastrigin", "fig3-rastrigin-shifted"}},
      {"fig4-w1-convergence",
       "W1 convergence study at N=100 and N=1000",
       {"fig4-w1-N100", "fig4-w1-N1000"}},
      {"fig5-series", "distance expectation across ensemble sizes", {"fig5-ackley", "fig5-rastrigin"}},
      {"fig6-series", "distance expectation across alpha", {"fig6-ackley", "fig6-rastrigin"}},
      {"paper-tables", "all four d=20 success-rate tables", {"table1", "table2", "table3", "table4"}},
  };
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const std::vector<PresetGroup>& preset_groups() {
  static const std::vector<PresetGroup> all = build_groups();
  return all;
}

const Preset* find_preset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

const PresetGroup* find_preset_group(const std::string& name) {
  for (const PresetGroup& g : preset_groups())
    if (g.name == name) return &g;
  return nullptr;
}

std::string list_presets_text() {
  std::ostringstream out;
  out << "presets:\n";
  for (const Preset& p : presets()) out << "  " << p.name << "  -- " << p.summary << "\n";
  out << "groups:\n";
  for (const PresetGroup& g : preset_groups()) {
    out << "  " << g.name << "  -- " << g.summary << " (";
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      if (i) out << ", ";
      out << g.members[i];
    }
    out << ")\n";
  }
  return out.str();
}

std::string describe_preset_text(const std::string& name) {
  if (const PresetGroup* g = find_preset_group(name)) {
    std::ostringstream out;
    out << g->name << ": " << g->summary << "\nmembers:\n";
    for (const std::string& m : g->members) out << "  " << m << "\n";
    return out.str();
  }
  const Preset* p = find_preset(name);
  if (!p) throw ConfigError("unknown preset \"" + name + "\" (see `presets`)");
  std::ostringstream out;
  out << p->name << ": " << p->summary << "\n"
      << "desk-scale M=" << p->config.num_samples << ", full-scale M=" << p->full_samples
      << " (--full)\n"
      << canonical_config_text(p->config);
  return out.str();
}

}  // namespace cbo::harness
