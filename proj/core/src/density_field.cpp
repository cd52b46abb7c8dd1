#include "cbo/density_field.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "cbo/errors.hpp"
#include "cbo/numerics.hpp"

namespace cbo {

double legendre(int m, double xi) {
  if (m == 0) return 1.0;
  if (m == 1) return xi;
  double pm1 = 1.0, p = xi;
  for (int k = 1; k < m; ++k) {
    const double next = ((2 * k + 1) * xi * p - k * pm1) / (k + 1);
    pm1 = p;
    p = next;
  }
  return p;
}

double legendre_deriv(int m, double xi) {
  // P'_{k+1} = P'_{k-1} + (2k+1) P_k
  if (m == 0) return 0.0;
  double dpm1 = 0.0, dp = 1.0;  // P'_0, P'_1
  double pm1 = 1.0, p = xi;     // P_0, P_1
  for (int k = 1; k < m; ++k) {
    const double dnext = dpm1 + (2 * k + 1) * p;
    const double next = ((2 * k + 1) * xi * p - k * pm1) / (k + 1);
    dpm1 = dp;
    dp = dnext;
    pm1 = p;
    p = next;
  }
  return dp;
}

const Quadrature& Quadrature::gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Quadrature>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  assert(n >= 1);
  auto q = std::make_unique<Quadrature>();
  q->nodes.resize(n);
  q->weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-like initial guess; converges in a few steps.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const double p = legendre(n, x);
      const double dp = legendre_deriv(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double dp = legendre_deriv(n, x);
    q->nodes[i] = x;
    q->weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Ascending node order.
  std::reverse(q->nodes.begin(), q->nodes.end());
  std::reverse(q->weights.begin(), q->weights.end());
  const Quadrature& ref = *q;
  cache.emplace(n, std::move(q));
  return ref;
}

DensityField1D::DensityField1D(double a, double b, int num_cells, int poly_degree)
    : a_(a), b_(b), num_cells_(num_cells), degree_(poly_degree) {
  if (!(b > a)) throw ConfigError("density domain must satisfy a < b");
  if (num_cells < 1) throw ConfigError("density mesh needs at least one cell");
  if (poly_degree < 0) throw ConfigError("poly_degree must be >= 0");
  h_ = (b - a) / num_cells;
  coeffs_.assign(static_cast<std::size_t>(num_cells) * (poly_degree + 1), 0.0);
}

DensityField1D DensityField1D::project(double a, double b, int num_cells, int poly_degree,
                                       const std::function<double(double)>& rho0) {
  DensityField1D rho(a, b, num_cells, poly_degree);
  const Quadrature& quad = Quadrature::gauss_legendre(std::max(poly_degree + 4, 8));
  for (int k = 0; k < num_cells; ++k) {
    const double xc = rho.cell_center(k);
    for (int m = 0; m <= poly_degree; ++m) {
      double s = 0.0;
      for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
        const double xi = quad.nodes[q];
        s += quad.weights[q] * rho0(xc + 0.5 * rho.h() * xi) * legendre(m, xi);
      }
      // (2m+1)/h * integral over the cell, with dx = (h/2) dxi.
      rho.coeff(k, m) = 0.5 * (2 * m + 1) * s;
    }
  }
  return rho;
}

DensityField1D DensityField1D::uniform(double a, double b, int num_cells, int poly_degree) {
  DensityField1D rho(a, b, num_cells, poly_degree);
  const double value = 1.0 / (b - a);
  for (int k = 0; k < num_cells; ++k) rho.coeff(k, 0) = value;
  return rho;
}

double DensityField1D::eval_ref(int cell, double xi) const {
  double s = 0.0;
  for (int m = 0; m <= degree_; ++m) s += coeff(cell, m) * legendre(m, xi);
  return s;
}

double DensityField1D::deriv_ref(int cell, double xi) const {
  double s = 0.0;
  for (int m = 1; m <= degree_; ++m) s += coeff(cell, m) * legendre_deriv(m, xi);
  return s * 2.0 / h_;
}

double DensityField1D::evaluate(double x) const {
  int cell = static_cast<int>(std::floor((x - a_) / h_));
  cell = std::clamp(cell, 0, num_cells_ - 1);
  const double xi = 2.0 * (x - cell_left(cell)) / h_ - 1.0;
  return eval_ref(cell, std::clamp(xi, -1.0, 1.0));
}

double DensityField1D::mass() const {
  std::vector<double> avg(num_cells_);
  for (int k = 0; k < num_cells_; ++k) avg[k] = cell_average(k);
  return h_ * pairwise_sum(avg);
}

double DensityField1D::l2_norm() const {
  double s = 0.0;
  for (int k = 0; k < num_cells_; ++k)
    for (int m = 0; m <= degree_; ++m) {
      const double c = coeff(k, m);
      s += c * c * h_ / (2 * m + 1);
    }
  return std::sqrt(s);
}

double DensityField1D::min_cell_average() const {
  double v = coeff(0, 0);
  for (int k = 1; k < num_cells_; ++k) v = std::min(v, cell_average(k));
  return v;
}

double DensityField1D::max_cell_average() const {
  double v = coeff(0, 0);
  for (int k = 1; k < num_cells_; ++k) v = std::max(v, cell_average(k));
  return v;
}

double DensityField1D::mean() const {
  const double m0 = mass();
  if (!(m0 > 0.0)) throw ConfigError("density has non-positive mass");
  const Quadrature& quad = Quadrature::gauss_legendre(degree_ + 3);
  double s = 0.0;
  for (int k = 0; k < num_cells_; ++k) {
    const double xc = cell_center(k);
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
      const double x = xc + 0.5 * h_ * quad.nodes[q];
      s += 0.5 * h_ * quad.weights[q] * x * eval_ref(k, quad.nodes[q]);
    }
  }
  return s / m0;
}

double DensityField1D::variance() const {
  const double m0 = mass();
  if (!(m0 > 0.0)) throw ConfigError("density has non-positive mass");
  const double mu = mean();
  const Quadrature& quad = Quadrature::gauss_legendre(degree_ + 3);
  double s = 0.0;
  for (int k = 0; k < num_cells_; ++k) {
    const double xc = cell_center(k);
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
      const double x = xc + 0.5 * h_ * quad.nodes[q];
      s += 0.5 * h_ * quad.weights[q] * (x - mu) * (x - mu) * eval_ref(k, quad.nodes[q]);
    }
  }
  return s / m0;
}

std::optional<std::pair<double, double>> DensityField1D::support(double threshold) const {
  int first = -1, last = -1;
  for (int k = 0; k < num_cells_; ++k) {
    if (cell_average(k) > threshold) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) return std::nullopt;
  return std::make_pair(cell_left(first), cell_left(last) + h_);
}

}  // namespace cbo
