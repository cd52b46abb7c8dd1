#include "cbo/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cbo/errors.hpp"
#include "cbo/numerics.hpp"

namespace cbo {

ConsensusPoint consensus_point(std::span<const double> positions, std::size_t dim,
                               std::span<const double> fvalues, double alpha) {
  const std::size_t n = fvalues.size();
  if (n == 0) throw ConfigError("consensus_point: empty ensemble");
  if (dim == 0 || positions.size() != n * dim)
    throw ConfigError("consensus_point: positions/fvalues size mismatch");
  if (!(alpha > 0.0)) throw ConfigError("consensus_point: alpha must be > 0");

  double fmin = fvalues[0];
  for (double fv : fvalues) {
    if (!std::isfinite(fv)) throw ConfigError("consensus_point: non-finite objective value");
    fmin = std::min(fmin, fv);
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(-alpha * (fvalues[i] - fmin));

  const double wsum = pairwise_sum(w);
  ConsensusPoint cp;
  cp.alpha = alpha;
  cp.log_normalizer = std::log(wsum) - alpha * fmin;
  cp.location.resize(dim);
  pairwise_weighted_rows(w, positions, dim, cp.location);
  for (double& c : cp.location) c /= wsum;
  return cp;
}

double consensus_point_density(const DensityField1D& rho, const Objective& f, double alpha) {
  if (f.dim != 1) throw ConfigError("consensus_point_density: objective must be 1D");
  if (!(alpha >= 0.0)) throw ConfigError("consensus_point_density: alpha must be >= 0");
  if (!(rho.mass() > 0.0)) throw ConfigError("consensus_point_density: degenerate density");

  const int nq = std::max(rho.poly_degree() + 2, 4);
  const Quadrature& quad = Quadrature::gauss_legendre(nq);
  const int n = rho.num_cells();

  // First pass: f at every quadrature node, for the stabilizing shift.
  std::vector<double> fq(static_cast<std::size_t>(n) * nq);
  double fmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double xc = rho.cell_center(k);
    for (int q = 0; q < nq; ++q) {
      const double x = xc + 0.5 * rho.h() * quad.nodes[q];
      const double fv = f(std::span<const double>(&x, 1));
      fq[k * nq + q] = fv;
      fmin = std::min(fmin, fv);
    }
  }

  std::vector<double> num(static_cast<std::size_t>(n) * nq), den(num.size());
  for (int k = 0; k < n; ++k) {
    const double xc = rho.cell_center(k);
    for (int q = 0; q < nq; ++q) {
      const double x = xc + 0.5 * rho.h() * quad.nodes[q];
      const double weight =
          0.5 * rho.h() * quad.weights[q] * rho.eval_ref(k, quad.nodes[q]) *
          std::exp(-alpha * (fq[k * nq + q] - fmin));
      den[k * nq + q] = weight;
      num[k * nq + q] = weight * x;
    }
  }
  const double denominator = pairwise_sum(den);
  if (!(denominator > 0.0))
    throw ConfigError("consensus_point_density: weighted mass is not positive");
  return pairwise_sum(num) / denominator;
}

}  // namespace cbo
