#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cbo/diagnostics.hpp"
#include "cbo/objective.hpp"
#include "cbo/rng.hpp"

namespace cbo {

enum class HeavisideMode { SmoothedErf, AlwaysOne };

// How the multiplicative noise magnitude reads |X - v_f|:
//   NormIsotropic: one scalar Euclidean distance scaling an isotropic d-dim
//                  Gaussian increment.
//   Componentwise: each coordinate scaled by its own |x_j - v_j|.
// The two coincide for d = 1. High-dimensional benchmark presets use
// Componentwise: with the isotropic reading the radial second moment grows by
// (1-lambda*dt)^2 + 2*d*sigma^2*dt per step, which exceeds 10 at the d=20
// benchmark parameters and overflows long before the final time (a unit test
// demonstrates this).
enum class NoiseMode { NormIsotropic, Componentwise };

struct CboParams {
  double lambda = 1.0;   // drift strength
  double sigma = 0.0;    // noise strength
  double alpha = 40.0;   // consensus weight exponent
  double epsilon = 1e-3; // Heaviside smoothing width
  double dt = 0.1;
  HeavisideMode heaviside_mode = HeavisideMode::SmoothedErf;
  NoiseMode noise_mode = NoiseMode::NormIsotropic;
};

enum class InitKind { UniformBox, Equidistant1D };

struct InitDistribution {
  InitKind kind = InitKind::UniformBox;
  std::vector<double> lower;  // size dim (or size 1, broadcast)
  std::vector<double> upper;
};

struct ParticleEnsemble {
  std::vector<double> positions;  // N x dim, row-major
  int dim = 1;
  double time = 0.0;
  std::vector<RandomStream> streams;  // one private stream per particle

  std::size_t size() const { return streams.size(); }
  std::span<double> particle(std::size_t i) {
    return {positions.data() + i * dim, static_cast<std::size_t>(dim)};
  }
  std::span<const double> particle(std::size_t i) const {
    return {positions.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

// (1/2) erf(x/eps) + 1/2: smooth, monotone, 0/1 limits.
double smoothed_heaviside(double x, double epsilon);

// Draws the initial ensemble. UniformBox consumes dim uniforms per particle
// from that particle's stream; Equidistant1D (dim==1 only) places midpoints
// X_i = a + (i + 1/2)(b - a)/N and consumes no randomness.
ParticleEnsemble make_ensemble(const InitDistribution& init, std::size_t num_particles, int dim,
                               std::uint64_t seed);

// One Euler-Maruyama step: X <- X - lambda*(X - v_f)*H*dt + noise, with v_f
// and all coefficients frozen at the pre-step ensemble. Throws
// DivergedRunError when a position or objective value leaves the finite range.
void em_step(ParticleEnsemble& ens, const CboParams& p, const Objective& f);

struct TrajectoryOptions {
  long series_stride = 10;  // record series every this many steps
  bool record_w1 = false;   // W1-to-minimizer series (d=1, known x_* only)
};

// Runs ceil(T/dt) steps from a seeded initial ensemble and measures the run.
// Success/distances are filled from the objective's known minimizer when
// present. Throws DivergedRunError on non-finite states.
RunRecord run_trajectory(const InitDistribution& init, std::size_t num_particles,
                         const CboParams& p, const Objective& f, double T, std::uint64_t seed,
                         const TrajectoryOptions& opts = {});

}  // namespace cbo
