#include "cbo/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cbo/errors.hpp"

namespace cbo::harness {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) bad("unknown key \"" + item.key() + "\" in " + where);
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

std::string heaviside_name(HeavisideMode m) {
  return m == HeavisideMode::SmoothedErf ? "smoothed_erf" : "always_one";
}

HeavisideMode heaviside_from_name(const std::string& s) {
  if (s == "smoothed_erf") return HeavisideMode::SmoothedErf;
  if (s == "always_one") return HeavisideMode::AlwaysOne;
  bad("unknown heaviside mode \"" + s + "\" (expected smoothed_erf or always_one)");
}

std::string noise_name(NoiseMode m) {
  return m == NoiseMode::NormIsotropic ? "norm_isotropic" : "componentwise";
}

NoiseMode noise_from_name(const std::string& s) {
  if (s == "norm_isotropic") return NoiseMode::NormIsotropic;
  if (s == "componentwise") return NoiseMode::Componentwise;
  bad("unknown noise mode \"" + s + "\" (expected norm_isotropic or componentwise)");
}

std::string init_kind_name(InitKind k) {
  return k == InitKind::UniformBox ? "uniform_box" : "equidistant_1d";
}

InitKind init_kind_from_name(const std::string& s) {
  if (s == "uniform_box") return InitKind::UniformBox;
  if (s == "equidistant_1d") return InitKind::Equidistant1D;
  bad("unknown init kind \"" + s + "\" (expected uniform_box or equidistant_1d)");
}

}  // namespace

std::string run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Particles: return "particles";
    case RunMode::MeanField1D: return "meanfield1d";
    case RunMode::Both: return "both";
  }
  bad("bad run mode enum value");
}

RunMode run_mode_from_name(const std::string& name) {
  if (name == "particles") return RunMode::Particles;
  if (name == "meanfield1d") return RunMode::MeanField1D;
  if (name == "both") return RunMode::Both;
  bad("unknown mode \"" + name + "\" (expected particles, meanfield1d, or both)");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, "top level",
             {"name", "benchmark", "cbo", "init", "N", "M", "T", "seed_base", "mode", "outputs",
              "trajectory", "meanfield", "sweep", "sweep_budget"});

  ExperimentConfig cfg;
  read_field(j, "name", cfg.name);
  read_field(j, "N", cfg.num_particles);
  read_field(j, "M", cfg.num_samples);
  read_field(j, "T", cfg.final_time);
  read_field(j, "seed_base", cfg.seed_base);
  read_field(j, "outputs", cfg.outputs);
  read_field(j, "sweep_budget", cfg.sweep_budget);
  if (j.contains("mode")) cfg.mode = run_mode_from_name(j.at("mode").get<std::string>());

  if (j.contains("benchmark")) {
    const json& b = j.at("benchmark");
    check_keys(b, "benchmark", {"family", "shift_B", "shift_C", "dim"});
    std::string family = benchmark_family_name(cfg.benchmark.family);
    read_field(b, "family", family);
    cfg.benchmark.family = benchmark_family_from_name(family);
    read_field(b, "shift_B", cfg.benchmark.shift_B);
    read_field(b, "shift_C", cfg.benchmark.shift_C);
    read_field(b, "dim", cfg.benchmark.dim);
  }

  if (j.contains("cbo")) {
    const json& c = j.at("cbo");
    check_keys(c, "cbo", {"lambda", "sigma", "alpha", "epsilon", "dt", "heaviside", "noise"});
    read_field(c, "lambda", cfg.cbo.lambda);
    read_field(c, "sigma", cfg.cbo.sigma);
    read_field(c, "alpha", cfg.cbo.alpha);
    read_field(c, "epsilon", cfg.cbo.epsilon);
    read_field(c, "dt", cfg.cbo.dt);
    if (c.contains("heaviside"))
      cfg.cbo.heaviside_mode = heaviside_from_name(c.at("heaviside").get<std::string>());
    if (c.contains("noise")) cfg.cbo.noise_mode = noise_from_name(c.at("noise").get<std::string>());
  }

  if (j.contains("init")) {
    const json& c = j.at("init");
    check_keys(c, "init", {"kind", "lower", "upper"});
    if (c.contains("kind")) cfg.init.kind = init_kind_from_name(c.at("kind").get<std::string>());
    read_field(c, "lower", cfg.init.lower);
    read_field(c, "upper", cfg.init.upper);
  }

  if (j.contains("trajectory")) {
    const json& c = j.at("trajectory");
    check_keys(c, "trajectory", {"series_stride", "record_w1"});
    read_field(c, "series_stride", cfg.trajectory.series_stride);
    read_field(c, "record_w1", cfg.trajectory.record_w1);
  }

  if (j.contains("meanfield")) {
    const json& c = j.at("meanfield");
    check_keys(c, "meanfield",
               {"domain_a", "domain_b", "num_cells", "poly_degree", "penalty", "theta", "cfl",
                "tau_max", "support_threshold", "use_limiter", "series_stride", "snapshot_stride",
                "tol"});
    read_field(c, "domain_a", cfg.meanfield.domain_a);
    read_field(c, "domain_b", cfg.meanfield.domain_b);
    read_field(c, "num_cells", cfg.meanfield.num_cells);
    read_field(c, "poly_degree", cfg.meanfield.poly_degree);
    read_field(c, "penalty", cfg.meanfield.penalty);
    read_field(c, "theta", cfg.meanfield.theta);
    read_field(c, "cfl", cfg.meanfield.cfl);
    read_field(c, "tau_max", cfg.meanfield.tau_max);
    read_field(c, "support_threshold", cfg.meanfield.support_threshold);
    read_field(c, "use_limiter", cfg.meanfield.use_limiter);
    read_field(c, "series_stride", cfg.meanfield.series_stride);
    read_field(c, "snapshot_stride", cfg.meanfield.snapshot_stride);
    read_field(c, "tol", cfg.meanfield_tol);
  }

  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    const json& c = j.at("sweep");
    check_keys(c, "sweep", {"N", "alpha", "shift_B"});
    SweepSpec sweep;
    read_field(c, "N", sweep.num_particles);
    read_field(c, "alpha", sweep.alpha);
    read_field(c, "shift_B", sweep.shift_B);
    cfg.sweep = std::move(sweep);
  }

  if (cfg.num_particles < 1) bad("N must be >= 1");
  if (cfg.num_samples < 1) bad("M must be >= 1");
  if (!(cfg.final_time >= 0.0)) bad("T must be >= 0");
  if (cfg.sweep_budget < 1) bad("sweep_budget must be >= 1");
  return cfg;
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["N"] = cfg.num_particles;
  j["M"] = cfg.num_samples;
  j["T"] = cfg.final_time;
  j["seed_base"] = cfg.seed_base;
  j["mode"] = run_mode_name(cfg.mode);
  j["outputs"] = cfg.outputs;
  j["sweep_budget"] = cfg.sweep_budget;
  j["benchmark"] = {{"family", benchmark_family_name(cfg.benchmark.family)},
                    {"shift_B", cfg.benchmark.shift_B},
                    {"shift_C", cfg.benchmark.shift_C},
                    {"dim", cfg.benchmark.dim}};
  j["cbo"] = {{"lambda", cfg.cbo.lambda},
              {"sigma", cfg.cbo.sigma},
              {"alpha", cfg.cbo.alpha},
              {"epsilon", cfg.cbo.epsilon},
              {"dt", cfg.cbo.dt},
              {"heaviside", heaviside_name(cfg.cbo.heaviside_mode)},
              {"noise", noise_name(cfg.cbo.noise_mode)}};
  j["init"] = {{"kind", init_kind_name(cfg.init.kind)},
               {"lower", cfg.init.lower},
               {"upper", cfg.init.upper}};
  j["trajectory"] = {{"series_stride", cfg.trajectory.series_stride},
                     {"record_w1", cfg.trajectory.record_w1}};
  j["meanfield"] = {{"domain_a", cfg.meanfield.domain_a},
                    {"domain_b", cfg.meanfield.domain_b},
                    {"num_cells", cfg.meanfield.num_cells},
                    {"poly_degree", cfg.meanfield.poly_degree},
                    {"penalty", cfg.meanfield.penalty},
                    {"theta", cfg.meanfield.theta},
                    {"cfl", cfg.meanfield.cfl},
                    {"tau_max", cfg.meanfield.tau_max},
                    {"support_threshold", cfg.meanfield.support_threshold},
                    {"use_limiter", cfg.meanfield.use_limiter},
                    {"series_stride", cfg.meanfield.series_stride},
                    {"snapshot_stride", cfg.meanfield.snapshot_stride},
                    {"tol", cfg.meanfield_tol}};
  if (cfg.sweep) {
    j["sweep"] = {{"N", cfg.sweep->num_particles},
                  {"alpha", cfg.sweep->alpha},
                  {"shift_B", cfg.sweep->shift_B}};
  } else {
    j["sweep"] = nullptr;
  }
  return j.dump(2) + "\n";
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace cbo::harness
