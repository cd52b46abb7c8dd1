#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "cbo/density_field.hpp"
#include "cbo/objective.hpp"

namespace cbo {

// Everything measured on one Monte-Carlo trajectory. Series are sampled on a
// common step grid (series_t), so records from one experiment aggregate by
// index without interpolation.
struct RunRecord {
  std::vector<double> final_vf;
  std::vector<double> final_positions;  // N x dim, row-major
  bool success = false;
  // (1/d)*|v_f - x_*|^2; NaN when x_* is unknown.
  double sq_dist_per_dim = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> series_t;
  std::vector<double> vf_series;        // snapshots x dim, row-major
  std::vector<double> variance_series;  // V = (1/N^2) sum_ij |X_i - X_j|^2
  std::vector<double> dist_series;      // (1/d)*|v_f(t) - x_*|^2
  std::vector<double> w1_series;        // d=1 only; empty otherwise
  std::uint64_t seed = 0;
  double wallclock_seconds = 0.0;
  bool diverged = false;
  long diverged_step = -1;
};

struct SeriesStats {
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> variance;  // population variance across samples
};

struct SampleStatistics {
  double success_rate = 0.0;
  double mean_sq_dist = 0.0;
  std::size_t num_samples = 0;
  std::size_t num_diverged = 0;
  SeriesStats variance_stats;
  SeriesStats dist_stats;
  SeriesStats w1_stats;
};

// Wasserstein-1 distance of the empirical measure to a Dirac at x_star.
// In 1D the inverse-CDF integral collapses to the mean absolute deviation.
double w1_to_dirac(std::span<const double> positions, double x_star);

// (1/N^2) * sum_ij |X_i - X_j|^2, computed in centered form.
double ensemble_variance(std::span<const double> positions, std::size_t dim);

// success: v_f inside the open box (x_*-0.25, x_*+0.25)^d, strict inequality;
// distance: (1/d)*|v_f - x_*|^2.
std::pair<bool, double> success_and_distance(std::span<const double> final_vf,
                                             std::span<const double> x_star);

// -(1/alpha) * log( (1/N) sum_i exp(-alpha f_i) ), shift-stabilized.
// Non-increasing in alpha for any fixed sample; tends to min f.
double laplace_value(std::span<const double> fvalues, double alpha);
// Same functional against a density: -(1/alpha) * log( ∫ e^{-αf} dρ / ∫ dρ ).
double laplace_value(const DensityField1D& rho, const Objective& f, double alpha);

// Success rate, distance expectation and per-time-bin series moments over M
// runs. Diverged runs count as failures and are excluded from the series.
SampleStatistics aggregate(std::span<const RunRecord> records);

}  // namespace cbo
