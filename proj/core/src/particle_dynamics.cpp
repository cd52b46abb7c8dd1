#include "cbo/particle_dynamics.hpp"

#include <chrono>
#include <cmath>

#include "cbo/consensus.hpp"
#include "cbo/errors.hpp"

namespace cbo {

double smoothed_heaviside(double x, double epsilon) {
  return 0.5 * std::erf(x / epsilon) + 0.5;
}

namespace {

void check_bounds(const InitDistribution& init, int dim) {
  auto at = [dim](const std::vector<double>& v, int j) -> double {
    if (v.size() == 1) return v[0];
    if (static_cast<int>(v.size()) != dim)
      throw ConfigError("init bounds must have size 1 or dim");
    return v[j];
  };
  if (init.lower.empty() || init.upper.empty())
    throw ConfigError("init bounds must be non-empty");
  for (int j = 0; j < dim; ++j)
    if (!(at(init.lower, j) < at(init.upper, j)))
      throw ConfigError("init bounds must satisfy lower < upper componentwise");
}

double bound_at(const std::vector<double>& v, int j) { return v.size() == 1 ? v[0] : v[j]; }

long step_of(const ParticleEnsemble& ens, double dt) {
  return std::lround(ens.time / dt);
}

}  // namespace

ParticleEnsemble make_ensemble(const InitDistribution& init, std::size_t num_particles, int dim,
                               std::uint64_t seed) {
  if (num_particles == 0) throw ConfigError("ensemble needs at least one particle");
  if (dim < 1) throw ConfigError("ensemble dim must be >= 1");
  check_bounds(init, dim);

  ParticleEnsemble ens;
  ens.dim = dim;
  ens.positions.resize(num_particles * dim);
  ens.streams.reserve(num_particles);
  for (std::size_t i = 0; i < num_particles; ++i) ens.streams.emplace_back(seed, i);

  switch (init.kind) {
    case InitKind::UniformBox:
      for (std::size_t i = 0; i < num_particles; ++i)
        for (int j = 0; j < dim; ++j) {
          const double lo = bound_at(init.lower, j);
          const double hi = bound_at(init.upper, j);
          ens.positions[i * dim + j] = lo + ens.streams[i].uniform() * (hi - lo);
        }
      break;
    case InitKind::Equidistant1D: {
      if (dim != 1) throw ConfigError("equidistant init is 1D only");
      const double lo = init.lower[0], hi = init.upper[0];
      const double w = (hi - lo) / static_cast<double>(num_particles);
      for (std::size_t i = 0; i < num_particles; ++i)
        ens.positions[i] = lo + (static_cast<double>(i) + 0.5) * w;
      break;
    }
  }
  return ens;
}

void em_step(ParticleEnsemble& ens, const CboParams& p, const Objective& f) {
  const std::size_t n = ens.size();
  const int d = ens.dim;
  if (f.dim != d) throw ConfigError("em_step: objective dim mismatch");

  std::vector<double> fvals(n);
  for (std::size_t i = 0; i < n; ++i) {
    fvals[i] = f(ens.particle(i));
    if (!std::isfinite(fvals[i]))
      throw DivergedRunError("non-finite objective value", step_of(ens, p.dt));
  }

  const ConsensusPoint cp = consensus_point(ens.positions, d, fvals, p.alpha);
  const double f_vf = f(cp.location);
  if (!std::isfinite(f_vf))
    throw DivergedRunError("non-finite objective at consensus point", step_of(ens, p.dt));

  const double sqrt_2dt = std::sqrt(2.0 * p.dt);
  for (std::size_t i = 0; i < n; ++i) {
    const double gate = (p.heaviside_mode == HeavisideMode::AlwaysOne)
                            ? 1.0
                            : smoothed_heaviside(fvals[i] - f_vf, p.epsilon);
    double* x = ens.positions.data() + i * d;

    double radius = 0.0;
    if (p.sigma > 0.0 && p.noise_mode == NoiseMode::NormIsotropic) {
      for (int j = 0; j < d; ++j) {
        const double dx = x[j] - cp.location[j];
        radius += dx * dx;
      }
      radius = std::sqrt(radius);
    }

    for (int j = 0; j < d; ++j) {
      const double dx = x[j] - cp.location[j];
      double step = -p.lambda * dx * gate * p.dt;
      if (p.sigma > 0.0) {
        const double magnitude =
            (p.noise_mode == NoiseMode::NormIsotropic) ? radius : std::abs(dx);
        step += sqrt_2dt * p.sigma * magnitude * ens.streams[i].normal();
      }
      x[j] += step;
    }
    for (int j = 0; j < d; ++j)
      if (!std::isfinite(x[j]))
        throw DivergedRunError("particle position diverged", step_of(ens, p.dt));
  }
  ens.time += p.dt;
}

RunRecord run_trajectory(const InitDistribution& init, std::size_t num_particles,
                         const CboParams& p, const Objective& f, double T, std::uint64_t seed,
                         const TrajectoryOptions& opts) {
  if (!(T >= 0.0)) throw ConfigError("run_trajectory: T must be >= 0");
  if (!(p.dt > 0.0)) throw ConfigError("run_trajectory: dt must be > 0");
  const auto tic = std::chrono::steady_clock::now();

  ParticleEnsemble ens = make_ensemble(init, num_particles, f.dim, seed);
  const long steps = static_cast<long>(std::ceil(T / p.dt - 1e-12));
  const long stride = opts.series_stride > 0 ? opts.series_stride : steps + 1;

  RunRecord rec;
  rec.seed = seed;
  const bool have_star = f.known_minimizer.has_value();
  const bool track_w1 = opts.record_w1 && f.dim == 1 && have_star;

  auto snapshot = [&](long step) {
    std::vector<double> fvals(num_particles);
    for (std::size_t i = 0; i < num_particles; ++i) fvals[i] = f(ens.particle(i));
    const ConsensusPoint cp = consensus_point(ens.positions, ens.dim, fvals, p.alpha);
    rec.series_t.push_back(static_cast<double>(step) * p.dt);
    rec.vf_series.insert(rec.vf_series.end(), cp.location.begin(), cp.location.end());
    rec.variance_series.push_back(ensemble_variance(ens.positions, ens.dim));
    if (have_star)
      rec.dist_series.push_back(success_and_distance(cp.location, *f.known_minimizer).second);
    if (track_w1) rec.w1_series.push_back(w1_to_dirac(ens.positions, (*f.known_minimizer)[0]));
    return cp;
  };

  snapshot(0);
  for (long k = 1; k <= steps; ++k) {
    em_step(ens, p, f);
    if (k % stride == 0 && k != steps) snapshot(k);
  }
  const ConsensusPoint final_cp = steps > 0 ? snapshot(steps) : [&] {
    std::vector<double> fvals(num_particles);
    for (std::size_t i = 0; i < num_particles; ++i) fvals[i] = f(ens.particle(i));
    return consensus_point(ens.positions, ens.dim, fvals, p.alpha);
  }();

  rec.final_vf = final_cp.location;
  rec.final_positions = ens.positions;
  if (have_star) {
    const auto [ok, dist] = success_and_distance(rec.final_vf, *f.known_minimizer);
    rec.success = ok;
    rec.sq_dist_per_dim = dist;
  }
  rec.wallclock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
  return rec;
}

}  // namespace cbo
