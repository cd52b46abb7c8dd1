#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbo/density_field.hpp"
#include "cbo/objective.hpp"
#include "cbo/particle_dynamics.hpp"

namespace cbo {

// Drift and diffusion fields of the nonlocal Fokker-Planck equation sampled
// on the DG mesh:
//   mu(x)    = -lambda * (x - v_f) * H^eps(f(x) - f(v_f))
//   kappa(x) = sigma^2 * (x - v_f)^2        (degenerate at v_f)
// with v_f the consensus point of rho itself.
struct FieldCoefficients {
  double vf = 0.0;
  double f_at_vf = 0.0;
  int nq = 0;                         // volume quadrature nodes per cell
  std::vector<double> mu_q;           // cells x nq
  std::vector<double> mu_edge;        // cells+1 interfaces
  std::vector<double> kappa_q;        // cells x nq
  std::vector<double> kappa_dx_q;     // cells x nq, spatial derivative
  std::vector<double> kappa_edge;     // cells+1
  std::vector<double> kappa_dx_edge;  // cells+1
  double max_abs_mu = 0.0;
  double max_kappa = 0.0;
};

struct MeanfieldParams {
  double domain_a = -3.0;
  double domain_b = 3.0;
  int num_cells = 600;
  int poly_degree = 1;
  // Coefficient of the [[kappa*rho]]*[[phi]] face stabilization, applied with
  // the usual (p+1)^2/h interior-penalty mesh scaling; exposed because these
  // forms are sensitive to under-penalization.
  double penalty = 1.0;
  double theta = 0.5;  // diffusion time weighting: 0.5 trapezoidal, 1 implicit
  double cfl = 0.9;    // safety factor in step_size
  double tau_max = 0.1;
  double support_threshold = 1e-6;
  // Optional minmod slope limiter on top of the always-on nonnegativity
  // scaling (which rescales slopes of cells whose polynomial dips below zero
  // without touching cell averages).
  bool use_limiter = false;
  long series_stride = 1;    // record scalar series every k accepted steps
  long snapshot_stride = 0;  // store the full density every k steps (0: never)
};

FieldCoefficients compute_fields(const DensityField1D& rho, const Objective& f,
                                 const CboParams& p);

// One explicit DG update of d/dt rho + d/dx(mu*rho) = 0 over tau/2, using the
// local Lax-Friedrichs interface flux mu*{rho} + |mu|/2*[[rho]] and zero flux
// at the domain boundary. Internally subcycled with SSP-RK2 at the scheme's
// own stability limit; tau itself must satisfy the step_size bound.
DensityField1D convection_halfstep(const DensityField1D& rho, const FieldCoefficients& fields,
                                   double tau, const MeanfieldParams& mp);

// Theta-scheme step of d/dt rho = d^2/dx^2 (kappa*rho) with interior-penalty
// face coupling ([[phi]]{(kappa rho)'} + [[kappa rho]]{phi'} - penalty
// [[kappa rho]][[phi]]); banded direct solve, residual verified to 1e-10.
DensityField1D diffusion_step(const DensityField1D& rho, const FieldCoefficients& fields,
                              double tau, const MeanfieldParams& mp);

// Splitting step convection(tau/2) -> diffusion(tau) -> convection(tau/2).
// mu is frozen at the incoming density for both half-steps; kappa is
// recomputed from the intermediate density.
DensityField1D strang_step(const DensityField1D& rho, const Objective& f, const CboParams& p,
                           double tau, const MeanfieldParams& mp);

// cfl * h / max|mu|, capped at tau_max; returns the cap when mu vanishes.
double step_size(const FieldCoefficients& fields, double h, const MeanfieldParams& mp);

struct MeanfieldResult {
  explicit MeanfieldResult(DensityField1D initial) : rho(std::move(initial)) {}

  DensityField1D rho;
  double stop_time = 0.0;
  long iterations = 0;
  std::optional<std::pair<double, double>> support;  // {rho > threshold} hull
  std::vector<double> t_series;
  std::vector<double> vf_series;
  std::vector<double> variance_series;  // V = 2 * Var(rho), the double-integral form
  std::vector<double> mass_series;
  std::vector<double> increment_series;  // L2 step increments on the series grid
  std::vector<std::pair<double, DensityField1D>> snapshots;
  std::vector<std::string> warnings;
  double mass_drift = 0.0;  // |m(end) - m(0)| / m(0)
};

// Marches strang_step with CFL-adaptive tau until the L2 increment test
// ||rho_k - rho_{k-1}|| < tol holds (skipped on the very first step so a
// coarse mesh cannot stop before the dynamics develop). Fails
// (ConvergenceError) on the iteration guard or a strong positivity violation.
MeanfieldResult solve_to_stationarity(const DensityField1D& rho0, const Objective& f,
                                      const CboParams& p, double tol,
                                      const MeanfieldParams& mp);

}  // namespace cbo
