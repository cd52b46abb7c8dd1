#pragma once

#include <cstddef>
#include <span>

namespace cbo {

// Pairwise (tree) summation. Deterministic for a fixed input order and far
// more accurate than sequential accumulation on large ensembles; the fixed
// reduction tree keeps results identical regardless of how callers are
// scheduled.
double pairwise_sum(std::span<const double> values);

// sum_i w[i] * v[i], same pairwise reduction tree over i.
double pairwise_dot(std::span<const double> w, std::span<const double> v);

// out[j] = sum_i w[i] * x[i*dim + j] for row-major x (n rows of length dim),
// reduced pairwise over rows independently per coordinate.
void pairwise_weighted_rows(std::span<const double> w, std::span<const double> x,
                            std::size_t dim, std::span<double> out);

// Ordinary least squares y ≈ intercept + slope*x, plus the coefficient of
// determination.
struct LinearFit {
  double slope;
  double intercept;
  double r_squared;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace cbo
