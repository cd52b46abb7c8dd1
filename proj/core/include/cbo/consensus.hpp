#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cbo/density_field.hpp"
#include "cbo/objective.hpp"

namespace cbo {

// Gibbs-weighted ensemble average with weight exp(-alpha*f). The exponent is
// shifted by min f before exponentiation, which cancels exactly in the
// quotient and keeps alpha*(spread of f) up to ~700 representable.
struct ConsensusPoint {
  std::vector<double> location;
  double log_normalizer = 0.0;  // log sum_i exp(-alpha*f_i), evaluated stably
  double alpha = 0.0;
};

// positions: row-major N x dim, fvalues: N entries, all finite.
ConsensusPoint consensus_point(std::span<const double> positions, std::size_t dim,
                               std::span<const double> fvalues, double alpha);

// Mean-field analogue: ∫ x e^{-αf} dρ / ∫ e^{-αf} dρ by per-cell Gauss
// quadrature on the density's own mesh.
double consensus_point_density(const DensityField1D& rho, const Objective& f, double alpha);

}  // namespace cbo
