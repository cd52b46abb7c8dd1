#include "cbo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbo/errors.hpp"
#include "cbo/numerics.hpp"

namespace cbo {

double w1_to_dirac(std::span<const double> positions, double x_star) {
  if (positions.empty()) throw ConfigError("w1_to_dirac: empty ensemble");
  std::vector<double> dev(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) dev[i] = std::abs(positions[i] - x_star);
  return pairwise_sum(dev) / static_cast<double>(positions.size());
}

double ensemble_variance(std::span<const double> positions, std::size_t dim) {
  if (dim == 0 || positions.size() % dim != 0)
    throw ConfigError("ensemble_variance: positions not divisible by dim");
  const std::size_t n = positions.size() / dim;
  if (n == 0) throw ConfigError("ensemble_variance: empty ensemble");

  std::vector<double> ones(n, 1.0), mean(dim);
  pairwise_weighted_rows(ones, positions, dim, mean);
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = positions[i * dim + j] - mean[j];
      s += d * d;
    }
    sq[i] = s;
  }
  // (1/N^2) sum_ij |X_i - X_j|^2 == 2 * mean squared deviation from the mean.
  return 2.0 * pairwise_sum(sq) / static_cast<double>(n);
}

std::pair<bool, double> success_and_distance(std::span<const double> final_vf,
                                             std::span<const double> x_star) {
  if (final_vf.size() != x_star.size() || final_vf.empty())
    throw ConfigError("success_and_distance: dimension mismatch");
  bool inside = true;
  double sq = 0.0;
  for (std::size_t j = 0; j < final_vf.size(); ++j) {
    const double d = final_vf[j] - x_star[j];
    if (!(std::abs(d) < 0.25)) inside = false;
    sq += d * d;
  }
  return {inside, sq / static_cast<double>(final_vf.size())};
}

double laplace_value(std::span<const double> fvalues, double alpha) {
  if (fvalues.empty()) throw ConfigError("laplace_value: empty sample");
  if (!(alpha > 0.0)) throw ConfigError("laplace_value: alpha must be > 0");
  const double fmin = *std::min_element(fvalues.begin(), fvalues.end());
  std::vector<double> w(fvalues.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-alpha * (fvalues[i] - fmin));
  const double s = pairwise_sum(w) / static_cast<double>(fvalues.size());
  return fmin - std::log(s) / alpha;
}

double laplace_value(const DensityField1D& rho, const Objective& f, double alpha) {
  if (f.dim != 1) throw ConfigError("laplace_value: objective must be 1D");
  if (!(alpha > 0.0)) throw ConfigError("laplace_value: alpha must be > 0");
  const double mass = rho.mass();
  if (!(mass > 0.0)) throw ConfigError("laplace_value: degenerate density");

  const int nq = std::max(rho.poly_degree() + 2, 4);
  const Quadrature& quad = Quadrature::gauss_legendre(nq);
  const int n = rho.num_cells();
  std::vector<double> fq(static_cast<std::size_t>(n) * nq);
  double fmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double xc = rho.cell_center(k);
    for (int q = 0; q < nq; ++q) {
      const double x = xc + 0.5 * rho.h() * quad.nodes[q];
      fq[k * nq + q] = f(std::span<const double>(&x, 1));
      fmin = std::min(fmin, fq[k * nq + q]);
    }
  }
  std::vector<double> terms(fq.size());
  for (int k = 0; k < n; ++k)
    for (int q = 0; q < nq; ++q)
      terms[k * nq + q] = 0.5 * rho.h() * quad.weights[q] * rho.eval_ref(k, quad.nodes[q]) *
                          std::exp(-alpha * (fq[k * nq + q] - fmin));
  const double s = pairwise_sum(terms) / mass;
  if (!(s > 0.0)) throw ConfigError("laplace_value: weighted integral not positive");
  return fmin - std::log(s) / alpha;
}

namespace {

SeriesStats series_moments(const std::vector<const RunRecord*>& recs,
                           std::span<const double> grid,
                           const std::vector<double> RunRecord::*series, std::size_t dim) {
  SeriesStats out;
  if (recs.empty() || grid.empty()) return out;
  const std::size_t bins = grid.size();
  for (const RunRecord* r : recs) {
    if ((r->*series).size() != bins * dim) return out;  // series absent for this experiment
  }
  out.t.assign(grid.begin(), grid.end());
  out.mean.resize(bins);
  out.variance.resize(bins);
  std::vector<double> vals(recs.size());
  for (std::size_t b = 0; b < bins; ++b) {
    for (std::size_t i = 0; i < recs.size(); ++i) vals[i] = (recs[i]->*series)[b];
    const double m = pairwise_sum(vals) / static_cast<double>(vals.size());
    double v = 0.0;
    for (double x : vals) v += (x - m) * (x - m);
    out.mean[b] = m;
    out.variance[b] = v / static_cast<double>(vals.size());
  }
  return out;
}

}  // namespace

SampleStatistics aggregate(std::span<const RunRecord> records) {
  if (records.empty()) throw ConfigError("aggregate: no run records");
  SampleStatistics stats;
  stats.num_samples = records.size();

  std::vector<const RunRecord*> ok;
  std::size_t successes = 0;
  std::vector<double> dists;
  for (const RunRecord& r : records) {
    if (r.diverged) {
      ++stats.num_diverged;
      continue;
    }
    ok.push_back(&r);
    if (r.success) ++successes;
    if (std::isfinite(r.sq_dist_per_dim)) dists.push_back(r.sq_dist_per_dim);
  }
  stats.success_rate = static_cast<double>(successes) / static_cast<double>(records.size());
  stats.mean_sq_dist =
      dists.empty() ? std::numeric_limits<double>::quiet_NaN()
                    : pairwise_sum(dists) / static_cast<double>(dists.size());

  if (!ok.empty()) {
    const std::vector<double>& grid = ok.front()->series_t;
    for (const RunRecord* r : ok) {
      if (r->series_t != grid)
        throw ConfigError("aggregate: run records use different time grids");
    }
    stats.variance_stats = series_moments(ok, grid, &RunRecord::variance_series, 1);
    stats.dist_stats = series_moments(ok, grid, &RunRecord::dist_series, 1);
    stats.w1_stats = series_moments(ok, grid, &RunRecord::w1_series, 1);
  }
  return stats;
}

}  // namespace cbo
