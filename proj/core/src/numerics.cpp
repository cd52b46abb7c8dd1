#include "cbo/numerics.hpp"

#include <cassert>
#include <cmath>

namespace cbo {
namespace {

constexpr std::size_t kBaseCase = 16;

template <class Term>
double tree_reduce(std::size_t lo, std::size_t hi, Term term) {
  if (hi - lo <= kBaseCase) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return tree_reduce(lo, mid, term) + tree_reduce(mid, hi, term);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return tree_reduce(0, values.size(), [&](std::size_t i) { return values[i]; });
}

double pairwise_dot(std::span<const double> w, std::span<const double> v) {
  assert(w.size() == v.size());
  return tree_reduce(0, w.size(), [&](std::size_t i) { return w[i] * v[i]; });
}

void pairwise_weighted_rows(std::span<const double> w, std::span<const double> x,
                            std::size_t dim, std::span<double> out) {
  assert(dim > 0 && x.size() == w.size() * dim && out.size() == dim);
  for (std::size_t j = 0; j < dim; ++j) {
    out[j] = tree_reduce(0, w.size(), [&](std::size_t i) { return w[i] * x[i * dim + j]; });
  }
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size() && x.size() >= 2);
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // Degenerate flat data: define R^2 = 1 (the fit is exact).
  fit.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace cbo
