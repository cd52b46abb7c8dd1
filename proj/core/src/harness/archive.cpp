#include "cbo/harness/archive.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#ifdef _WIN32
#include <process.h>
#else
#include <unistd.h>
#endif

#include "cbo/errors.hpp"

namespace cbo::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Shortest-exact formatting for CSV cells so files are reproducible.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Trim to the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, x);
    if (std::strtod(probe, nullptr) == x) return probe;
  }
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("short write to " + path.string());
}

std::string series_csv(const SeriesStats& s) {
  std::ostringstream out;
  out << "t,mean,variance\n";
  for (std::size_t i = 0; i < s.t.size(); ++i)
    out << fmt(s.t[i]) << ',' << fmt(s.mean[i]) << ',' << fmt(s.variance[i]) << '\n';
  return out.str();
}

std::string runs_csv(const ResultArchive& a) {
  const int dim = a.config.benchmark.dim;
  std::ostringstream out;
  out << "sample,seed,diverged,diverged_step,success,sq_dist_per_dim,wallclock_seconds";
  for (int jcol = 0; jcol < dim; ++jcol) out << ",vf_" << jcol;
  out << '\n';
  for (std::size_t k = 0; k < a.runs.size(); ++k) {
    const RunRecord& r = a.runs[k];
    out << k << ',' << r.seed << ',' << (r.diverged ? 1 : 0) << ',' << r.diverged_step << ','
        << (r.success ? 1 : 0) << ',' << fmt(r.sq_dist_per_dim) << ','
        << fmt(r.wallclock_seconds);
    for (int jcol = 0; jcol < dim; ++jcol) {
      out << ',';
      if (static_cast<std::size_t>(jcol) < r.final_vf.size()) out << fmt(r.final_vf[jcol]);
    }
    out << '\n';
  }
  return out.str();
}

std::string meanfield_csv(const MeanfieldResult& mf) {
  std::ostringstream out;
  out << "t,vf,variance,mass,increment\n";
  for (std::size_t i = 0; i < mf.t_series.size(); ++i)
    out << fmt(mf.t_series[i]) << ',' << fmt(mf.vf_series[i]) << ','
        << fmt(mf.variance_series[i]) << ',' << fmt(mf.mass_series[i]) << ','
        << fmt(mf.increment_series[i]) << '\n';
  return out.str();
}

std::string density_csv(const MeanfieldResult& mf) {
  std::ostringstream out;
  out << "t,x,density\n";
  auto emit = [&](double t, const DensityField1D& rho) {
    for (int k = 0; k < rho.num_cells(); ++k)
      out << fmt(t) << ',' << fmt(rho.cell_center(k)) << ',' << fmt(rho.cell_average(k)) << '\n';
  };
  for (const auto& [t, rho] : mf.snapshots) emit(t, rho);
  emit(mf.stop_time, mf.rho);
  return out.str();
}

json nan_safe(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

}  // namespace

std::string stats_json_text(const ResultArchive& a) {
  json j;
  j["name"] = a.config.name;
  j["seed_base"] = a.config.seed_base;
  j["num_samples"] = a.stats.num_samples;
  j["num_diverged"] = a.stats.num_diverged;
  j["success_rate"] = nan_safe(a.stats.success_rate);
  j["mean_sq_dist"] = nan_safe(a.stats.mean_sq_dist);
  j["objective_evaluations"] = a.objective_evaluations;
  j["tool_version"] = a.tool_version;
  j["rng_scheme"] = a.rng_scheme;
  j["status"] = a.status;
  j["warnings"] = a.warnings;
  if (a.meanfield) {
    const MeanfieldResult& mf = *a.meanfield;
    json m;
    m["stop_time"] = mf.stop_time;
    m["iterations"] = mf.iterations;
    if (mf.support)
      m["support"] = {mf.support->first, mf.support->second};
    else
      m["support"] = nullptr;
    m["mass_drift"] = mf.mass_drift;
    m["warnings"] = mf.warnings;
    j["meanfield"] = m;
  }
  return j.dump(2) + "\n";
}

fs::path write_archive(const ResultArchive& a, const fs::path& dir) {
  const fs::path final_path = dir.lexically_normal();
  if (final_path.empty()) throw ConfigError("archive path is empty");
  if (final_path.has_parent_path()) fs::create_directories(final_path.parent_path());

#ifdef _WIN32
  const int pid = _getpid();
#else
  const int pid = static_cast<int>(::getpid());
#endif
  const fs::path tmp = final_path.string() + ".tmp-" + std::to_string(pid);
  fs::remove_all(tmp);
  fs::create_directories(tmp / "series");

  write_text(tmp / "config.copy", canonical_config_text(a.config));
  write_text(tmp / "stats.json", stats_json_text(a));
  write_text(tmp / "runs.csv", runs_csv(a));
  if (!a.stats.variance_stats.t.empty())
    write_text(tmp / "series" / "variance.csv", series_csv(a.stats.variance_stats));
  if (!a.stats.dist_stats.t.empty())
    write_text(tmp / "series" / "dist.csv", series_csv(a.stats.dist_stats));
  if (!a.stats.w1_stats.t.empty())
    write_text(tmp / "series" / "w1.csv", series_csv(a.stats.w1_stats));
  if (a.meanfield) {
    write_text(tmp / "series" / "meanfield.csv", meanfield_csv(*a.meanfield));
    write_text(tmp / "series" / "density.csv", density_csv(*a.meanfield));
  }

  if (fs::exists(final_path)) {
    const fs::path old = final_path.string() + ".old-" + std::to_string(pid);
    fs::remove_all(old);
    fs::rename(final_path, old);
    fs::rename(tmp, final_path);
    fs::remove_all(old);
  } else {
    fs::rename(tmp, final_path);
  }
  return final_path;
}

}  // namespace cbo::harness
