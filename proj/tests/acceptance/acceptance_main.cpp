// Acceptance gate. Each criterion prints exactly one PASS/FAIL line with the
// measured numbers; the process exits non-zero if any criterion fails.
//
// Runs at desk scale (M = 100..200) and is expected to finish in a few
// minutes on one core. Archives land under acceptance-out/ in the working
// directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cbo/consensus.hpp"
#include "cbo/density_field.hpp"
#include "cbo/diagnostics.hpp"
#include "cbo/errors.hpp"
#include "cbo/harness/archive.hpp"
#include "cbo/harness/config.hpp"
#include "cbo/harness/presets.hpp"
#include "cbo/harness/runner.hpp"
#include "cbo/meanfield.hpp"
#include "cbo/numerics.hpp"
#include "cbo/objective.hpp"
#include "cbo/particle_dynamics.hpp"
#include "cbo/rng.hpp"

namespace {

using namespace cbo;
using namespace cbo::harness;
namespace fs = std::filesystem;

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%2d] %s  %s — %s\n", index, pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig preset_config(const std::string& name, const std::string& out_tag) {
  const Preset* p = find_preset(name);
  if (!p) throw ConfigError("acceptance: missing preset " + name);
  ExperimentConfig cfg = p->config;
  cfg.outputs = "acceptance-out/" + out_tag;
  return cfg;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---- 1: d=20 Ackley success table at alpha=30 ------------------------------

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  // Reference band: squared consensus-point error ||v_f - x*||^2 (the
  // published reference values carry no 1/d normalization; the per-dimension
  // cross-check at N=100 agrees with our measurements to within sampling
  // noise once the factor d is accounted for).
  const double lo = 5.21e-4 / 5.0, hi = 2.57e-3 * 5.0;
  bool pass = true;
  std::ostringstream detail;
  double worst_rate = 1.0, dist_min = 1e300, dist_max = 0.0;
  for (int n : {50, 100, 200}) {
    for (int b : {0, 1, 2}) {
      const std::string cell = "table1-N" + std::to_string(n) + "-x" + std::to_string(b);
      const ExperimentConfig cfg = preset_config(cell, cell);
      const auto archive = run_experiment(cfg);
      const double rate = archive.stats.success_rate;
      const double dist = archive.stats.mean_sq_dist * static_cast<double>(cfg.benchmark.dim);
      worst_rate = std::min(worst_rate, rate);
      dist_min = std::min(dist_min, dist);
      dist_max = std::max(dist_max, dist);
      if (rate != 1.0 || !(dist >= lo && dist <= hi)) {
        pass = false;
        detail << cell << ": rate=" << rate << " dist=" << dist << "; ";
      }
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 600.0) pass = false;
  report(1, "ackley d=20 success table (N x minimizer grid)", pass,
         detail.str() +
             fmt("min rate=%.3f, dist in [%.2e, %.2e] vs band [%.2e, %.2e], %.0f s (< 600 s)",
                 worst_rate, dist_min, dist_max, lo, hi, elapsed));
}

// ---- 2: rastrigin alpha sweep trend ----------------------------------------

void criterion2() {
  double r10 = -1.0, r30 = -1.0, r50 = -1.0;
  for (int a : {10, 30, 50}) {
    const std::string cell = "table4-alpha" + std::to_string(a) + "-x0";
    const auto archive = run_experiment(preset_config(cell, cell));
    (a == 10 ? r10 : a == 30 ? r30 : r50) = archive.stats.success_rate;
  }
  const bool pass = r10 < r30 && r30 < r50 && r10 <= 0.15 && r30 >= 0.45 && r30 <= 0.75 &&
                    r50 >= 0.95;
  report(2, "rastrigin d=20 success ordered in alpha", pass,
         fmt("rates: alpha10=%.0f%% (<=15), alpha30=%.0f%% (45..75), alpha50=%.0f%% (>=95)",
             100 * r10, 100 * r30, 100 * r50));
}

// ---- 3: laplace principle on samples and densities -------------------------

void criterion3() {
  bool monotone = true;
  RandomStream rs(2026, 0);
  std::vector<double> f(2000);
  for (double& v : f) {
    const double x = 6.0 * rs.uniform() - 3.0;
    v = double_well(x);
  }
  double fmin = f[0];
  for (double v : f) fmin = std::min(fmin, v);
  double prev = laplace_value(f, 0.01);
  for (double alpha = 0.02; alpha <= 2e4; alpha *= 1.5) {
    const double cur = laplace_value(f, alpha);
    if (cur > prev + 1e-12) monotone = false;
    prev = cur;
  }
  const double gap_sample = std::fabs(laplace_value(f, 1e4) - fmin);

  const DensityField1D rho = DensityField1D::uniform(-1.0, 1.0, 400, 1);
  Objective q;
  q.dim = 1;
  q.eval = [](std::span<const double> x) { return x[0] * x[0]; };
  double prev_d = laplace_value(rho, q, 0.01);
  for (double alpha = 0.02; alpha <= 2e4; alpha *= 1.5) {
    const double cur = laplace_value(rho, q, alpha);
    if (cur > prev_d + 1e-12) monotone = false;
    prev_d = cur;
  }
  const double gap_density = std::fabs(laplace_value(rho, q, 1e4) - 0.0);

  const bool pass = monotone && gap_sample <= 1e-3 && gap_density <= 1e-3;
  report(3, "laplace functional monotone, reaches min f at alpha=1e4", pass,
         fmt("monotone=%s, |E-min| sample=%.2e, density=%.2e (<= 1e-3)",
             monotone ? "yes" : "no", gap_sample, gap_density));
}

// ---- 4: variance decay laws ------------------------------------------------

void criterion4() {
  // Particle half: flat objective, open gate, sigma=0.
  auto ens = make_ensemble({InitKind::UniformBox, {-3.0}, {3.0}}, 64, 1, 11);
  CboParams p;
  p.sigma = 0.0;
  p.lambda = 1.0;
  p.dt = 0.1;
  p.heaviside_mode = HeavisideMode::AlwaysOne;
  Objective flat;
  flat.dim = 1;
  flat.eval = [](std::span<const double>) { return 3.0; };
  const double v0 = ensemble_variance(ens.positions, 1);
  const double q = 1.0 - p.lambda * p.dt;
  double worst_rel = 0.0;
  double expected = v0;
  for (int k = 1; k <= 60; ++k) {
    em_step(ens, p, flat);
    expected *= q * q;
    const double vk = ensemble_variance(ens.positions, 1);
    worst_rel = std::max(worst_rel, std::fabs(vk - expected) / expected);
  }
  const bool particle_ok = worst_rel < 1e-11;

  // Mean-field half: same flat objective, fitted variance decay rate ~ 2*lambda.
  MeanfieldParams mp;
  mp.num_cells = 600;  // h = 1e-2
  DensityField1D rho = DensityField1D::uniform(-3.0, 3.0, 600, 1);
  std::vector<double> ts, logv;
  double t = 0.0;
  ts.push_back(t);
  logv.push_back(std::log(2.0 * rho.variance()));
  while (t < 1.0) {
    const auto F = compute_fields(rho, flat, p);
    const double tau = step_size(F, rho.h(), mp);
    rho = strang_step(rho, flat, p, tau, mp);
    t += tau;
    ts.push_back(t);
    logv.push_back(std::log(2.0 * rho.variance()));
  }
  const LinearFit fit = linear_fit(ts, logv);
  const double rate = -fit.slope;
  const bool field_ok = std::fabs(rate - 2.0 * p.lambda) <= 0.1 * 2.0 * p.lambda;

  report(4, "variance decay: exact particle law, mean-field rate 2*lambda",
         particle_ok && field_ok,
         fmt("particle worst rel err=%.2e (< 1e-11), field rate=%.3f vs 2.0 (+/-10%%), R2=%.4f",
             worst_rel, rate, fit.r_squared));
}

// ---- 5: stationary level-set ensemble --------------------------------------

void criterion5() {
  ParticleEnsemble ens;
  ens.dim = 1;
  ens.positions = {-3.27340813422834, -0.135112140360701, 0.389433406285337,
                   3.01908686830371};
  for (std::size_t i = 0; i < 4; ++i) ens.streams.emplace_back(17, i);
  CboParams p;
  p.sigma = 0.0;
  p.alpha = 40.0;
  p.dt = 0.1;
  const Objective f = make_objective({BenchmarkFamily::DoubleWell, 0.0, 0.0, 1});
  double max_step_move = 0.0;
  std::vector<double> prev = ens.positions;
  for (int k = 0; k < 200; ++k) {
    em_step(ens, p, f);
    for (std::size_t i = 0; i < 4; ++i)
      max_step_move = std::max(max_step_move, std::fabs(ens.positions[i] - prev[i]));
    prev = ens.positions;
  }
  const bool pass = max_step_move < 1e-12;
  report(5, "level-set ensemble stationary under sigma=0 smoothed gate", pass,
         fmt("max per-step movement=%.2e (< 1e-12) over 200 steps", max_step_move));
}

// ---- 6: W1 convergence study ------------------------------------------------

void criterion6() {
  struct W1Out {
    double w1_at_0 = -1.0;
    double r2 = 0.0;
    double var_peak = 0.0;
  };
  auto study = [&](const std::string& preset) {
    auto cfg = preset_config(preset, preset);
    const auto archive = run_experiment(cfg);
    W1Out out;
    const SeriesStats& s = archive.stats.w1_stats;
    if (!s.mean.empty()) out.w1_at_0 = s.mean.front();
    // The decay claim concerns the transient before the finite-N fluctuation
    // plateau, so fit log-mean only while the mean sits well above the tail
    // level (the plateau itself is what the variance sub-check probes).
    double plateau = 0.0;
    const std::size_t n = s.mean.size();
    const std::size_t tail = std::max<std::size_t>(3, n / 10);
    for (std::size_t i = n - tail; i < n; ++i) plateau += s.mean[i] / static_cast<double>(tail);
    std::vector<double> lw;
    std::vector<double> ts;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (s.mean[i] > 10.0 * plateau) {
        ts.push_back(s.t[i]);
        lw.push_back(std::log(s.mean[i]));
      }
    }
    if (ts.size() >= 5) out.r2 = linear_fit(ts, lw).r_squared;
    for (double v : s.variance) out.var_peak = std::max(out.var_peak, v);
    return out;
  };
  const W1Out a = study("fig4-w1-N100");
  const W1Out b = study("fig4-w1-N1000");
  const bool init_ok = std::fabs(a.w1_at_0 - 1.25) <= 2.0 / 100.0 &&
                       std::fabs(b.w1_at_0 - 1.25) <= 2.0 / 1000.0;
  const bool decay_ok = a.r2 >= 0.95 && b.r2 >= 0.95;
  const bool peak_ok = b.var_peak < a.var_peak;
  report(6, "w1 study: initial value, exponential decay, fluctuation peak",
         init_ok && decay_ok && peak_ok,
         fmt("W1(0): %.4f/%.4f (to 1.25), R2: %.3f/%.3f (>= 0.95), var peak %.2e > %.2e",
             a.w1_at_0, b.w1_at_0, a.r2, b.r2, a.var_peak, b.var_peak));
}

// ---- 7 & 8: mean-field stopping times + particle consistency ----------------

struct PanelResult {
  std::string name;
  double stop_time = 0.0;
  double expected = 0.0;
  bool support_has_min = false;
  double mass_drift = 0.0;
  std::pair<double, double> support{0.0, 0.0};
};

std::vector<PanelResult> g_panels;
std::vector<double> g_particle_vfs;  // particle consensus values for criterion 8

void criterion7() {
  struct Panel {
    const char* preset;
    double expected_stop;
    double minimizer;
    bool with_particles;
  };
  const Panel panels[] = {
      {"fig3-ackley", 5.7, 0.0, true},
      {"fig3-ackley-shifted", 25.0, 2.0, false},
      {"fig3-rastrigin", 58.0, 0.0, false},
      {"fig3-rastrigin-shifted", 78.0, 2.0, false},
  };
  bool pass = true;
  std::ostringstream detail;
  for (const Panel& panel : panels) {
    auto cfg = preset_config(panel.preset, panel.preset);
    if (panel.with_particles) {
      cfg.mode = RunMode::Both;
      cfg.num_samples = 200;  // reused by criterion 8
    } else {
      cfg.mode = RunMode::MeanField1D;
    }
    const auto archive = run_experiment(cfg);
    PanelResult r;
    r.name = panel.preset;
    r.expected = panel.expected_stop;
    if (archive.meanfield) {
      r.stop_time = archive.meanfield->stop_time;
      r.mass_drift = archive.meanfield->mass_drift;
      if (archive.meanfield->support) {
        r.support = *archive.meanfield->support;
        r.support_has_min =
            r.support.first <= panel.minimizer && panel.minimizer <= r.support.second;
      }
    }
    g_panels.push_back(r);
    if (panel.with_particles)
      for (const RunRecord& run : archive.runs)
        if (!run.diverged && !run.final_vf.empty()) g_particle_vfs.push_back(run.final_vf[0]);

    const bool time_ok = std::fabs(r.stop_time - r.expected) <= 0.3 * r.expected;
    if (!time_ok || !r.support_has_min) pass = false;
    detail << r.name << "=" << fmt("%.1f", r.stop_time) << " (exp " << r.expected << ") ";
  }
  report(7, "mean-field stopping times within 30%, support holds minimizer", pass,
         detail.str());
}

void criterion8() {
  const PanelResult* ackley_panel = nullptr;
  for (const auto& r : g_panels)
    if (r.name == "fig3-ackley") ackley_panel = &r;
  if (!ackley_panel || g_particle_vfs.empty()) {
    report(8, "particle consensus values inside mean-field support", false,
           "missing panel data from criterion 7");
    return;
  }
  std::size_t inside = 0;
  for (double v : g_particle_vfs)
    if (v >= ackley_panel->support.first && v <= ackley_panel->support.second) ++inside;
  const double frac = double(inside) / double(g_particle_vfs.size());
  report(8, "particle consensus values inside mean-field support", frac >= 0.95,
         fmt("%zu/%zu inside [%.4f, %.4f] (%.1f%%, need >= 95%%)", inside,
             g_particle_vfs.size(), ackley_panel->support.first,
             ackley_panel->support.second, 100 * frac));
}

// ---- 9: PDE solver quality ---------------------------------------------------

double gaussian(double x, double center, double s) {
  return std::exp(-0.5 * (x - center) * (x - center) / (s * s)) /
         (s * std::sqrt(2.0 * M_PI));
}

double field_l2_error(const DensityField1D& rho, const std::function<double(double)>& exact) {
  const auto& q = Quadrature::gauss_legendre(6);
  double err = 0.0;
  for (int k = 0; k < rho.num_cells(); ++k) {
    const double xl = rho.cell_left(k);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double x = xl + 0.5 * rho.h() * (q.nodes[i] + 1.0);
      const double d = rho.eval_ref(k, q.nodes[i]) - exact(x);
      err += 0.5 * rho.h() * q.weights[i] * d * d;
    }
  }
  return std::sqrt(err);
}

FieldCoefficients const_fields(const DensityField1D& rho, double mu0, double kappa0) {
  FieldCoefficients F;
  const int nq = std::max(rho.poly_degree() + 2, 4);
  F.nq = nq;
  F.mu_q.assign(static_cast<std::size_t>(rho.num_cells()) * nq, mu0);
  F.mu_edge.assign(rho.num_cells() + 1, mu0);
  F.kappa_q.assign(static_cast<std::size_t>(rho.num_cells()) * nq, kappa0);
  F.kappa_dx_q.assign(static_cast<std::size_t>(rho.num_cells()) * nq, 0.0);
  F.kappa_edge.assign(rho.num_cells() + 1, kappa0);
  F.kappa_dx_edge.assign(rho.num_cells() + 1, 0.0);
  F.max_abs_mu = std::fabs(mu0);
  F.max_kappa = std::fabs(kappa0);
  return F;
}

void criterion9() {
  // Mass conservation over the full benchmark solves from criterion 7.
  double worst_drift = 0.0;
  for (const auto& r : g_panels) worst_drift = std::max(worst_drift, r.mass_drift);
  const bool mass_ok = !g_panels.empty() && worst_drift <= 1e-6;

  // Spatial accuracy: advection-diffusion of a gaussian with constant fields
  // (exact solution translates and widens), strang-composed by hand.
  MeanfieldParams mp;
  const double mu0 = 1.0, kappa0 = 0.02, T = 0.4, s0 = 0.15;
  std::vector<double> errors;
  for (int cells : {60, 120, 240}) {
    DensityField1D rho = DensityField1D::project(
        -3.0, 3.0, cells, 1, [&](double x) { return gaussian(x, -1.0, s0); });
    const auto F = const_fields(rho, mu0, kappa0);
    const double tau = 0.5 * rho.h();
    const int steps = static_cast<int>(std::lround(T / tau));
    for (int k = 0; k < steps; ++k) {
      rho = convection_halfstep(rho, F, tau, mp);
      rho = diffusion_step(rho, F, tau, mp);
      rho = convection_halfstep(rho, F, tau, mp);
    }
    const double s_end = std::sqrt(s0 * s0 + 2.0 * kappa0 * T);
    errors.push_back(
        field_l2_error(rho, [&](double x) { return gaussian(x - mu0 * T, -1.0, s_end); }));
  }
  const double order_a = std::log2(errors[0] / errors[1]);
  const double order_b = std::log2(errors[1] / errors[2]);
  const bool spatial_ok = order_a >= 1.5 && order_b >= 1.5;

  // Temporal accuracy of the full strang_step on frozen-coefficient dynamics.
  Objective flat;
  flat.dim = 1;
  flat.eval = [](std::span<const double>) { return 2.0; };
  CboParams p;
  p.sigma = 0.7;
  p.alpha = 40.0;
  p.heaviside_mode = HeavisideMode::AlwaysOne;
  MeanfieldParams mp2;
  mp2.num_cells = 300;
  const DensityField1D rho0 = DensityField1D::project(
      -3.0, 3.0, 300, 1, [](double x) { return gaussian(x, 0.5, 0.4); });
  const double horizon = 0.04;
  auto solve = [&](int steps) {
    DensityField1D rho = rho0;
    for (int k = 0; k < steps; ++k) rho = strang_step(rho, flat, p, horizon / steps, mp2);
    return rho;
  };
  const DensityField1D ref = solve(160);
  std::vector<double> terr;
  for (int steps : {10, 20, 40}) {
    const auto rho = solve(steps);
    double diff = 0.0;
    for (std::size_t i = 0; i < rho.coeffs().size(); ++i) {
      const double d = rho.coeffs()[i] - ref.coeffs()[i];
      diff += d * d;
    }
    terr.push_back(std::sqrt(diff));
  }
  const double strang_order = std::log2(terr[1] / terr[2]);
  const bool strang_ok =
      terr[0] > terr[1] && terr[1] > terr[2] && std::fabs(strang_order - 2.0) <= 0.4;

  report(9, "solver quality: mass, spatial order, strang order",
         mass_ok && spatial_ok && strang_ok,
         fmt("mass drift=%.1e (<= 1e-6), spatial orders %.2f/%.2f (>= 1.5), strang order %.2f",
             worst_drift, order_a, order_b, strang_order));
}

// ---- 10: byte-identical stats ------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion10() {
  ExperimentConfig cfg = preset_config("fig1-double-well", "determinism-a");
  cfg.num_samples = 10;
  cfg.final_time = 5.0;
  (void)run_experiment(cfg);
  cfg.outputs = "acceptance-out/determinism-b";
  (void)run_experiment(cfg);
  const std::string a = slurp("acceptance-out/determinism-a/stats.json");
  const std::string b = slurp("acceptance-out/determinism-b/stats.json");
  // And a rewrite of the same path.
  (void)run_experiment(cfg);
  const std::string b2 = slurp("acceptance-out/determinism-b/stats.json");
  const bool pass = !a.empty() && a == b && b == b2;
  report(10, "repeated runs produce byte-identical stats.json", pass,
         fmt("%zu bytes, equal=%s", a.size(), pass ? "yes" : "no"));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::printf("acceptance gate: 10 criteria, desk scale\n");
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
  } catch (const std::exception& e) {
    std::printf("[--] FAIL unexpected exception — %s\n", e.what());
    ++g_failures;
  }
  std::printf("acceptance: %d/10 passed, %.0f s total\n", 10 - g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
