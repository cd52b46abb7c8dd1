#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cbo {

// Legendre polynomial P_m and its derivative on the reference element [-1,1].
double legendre(int m, double xi);
double legendre_deriv(int m, double xi);

// Gauss-Legendre rule on [-1,1], nodes to full double precision (Newton on
// P_n roots).
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  static const Quadrature& gauss_legendre(int n);  // cached per n
};

// Piecewise polynomial density on a uniform mesh of [a,b]: per cell K,
// rho(x) = sum_m coeff(K,m)·P_m(xi) with xi = 2(x-x_K)/h in [-1,1].
// The modal basis diagonalizes the mass matrix: ∫_K P_m P_n dx = h/(2m+1)·δ.
class DensityField1D {
 public:
  DensityField1D(double a, double b, int num_cells, int poly_degree);

  // L2 projection of a pointwise density (per-cell Gauss quadrature).
  static DensityField1D project(double a, double b, int num_cells, int poly_degree,
                                const std::function<double(double)>& rho0);
  // Normalized indicator of [a,b] (the uniform initial density).
  static DensityField1D uniform(double a, double b, int num_cells, int poly_degree);

  double a() const { return a_; }
  double b() const { return b_; }
  double h() const { return h_; }
  int num_cells() const { return num_cells_; }
  int poly_degree() const { return degree_; }
  int modes() const { return degree_ + 1; }

  double cell_left(int k) const { return a_ + k * h_; }
  double cell_center(int k) const { return a_ + (k + 0.5) * h_; }

  double coeff(int cell, int mode) const { return coeffs_[cell * modes() + mode]; }
  double& coeff(int cell, int mode) { return coeffs_[cell * modes() + mode]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  double cell_average(int cell) const { return coeff(cell, 0); }

  // Value at reference coordinate xi within a cell, and d/dx there.
  double eval_ref(int cell, double xi) const;
  double deriv_ref(int cell, double xi) const;
  // Point evaluation (x clamped into [a,b]).
  double evaluate(double x) const;

  double mass() const;     // ∫ rho dx
  double l2_norm() const;  // ‖rho‖_L2, exact for the modal expansion
  double min_cell_average() const;
  double max_cell_average() const;

  // Mean and variance of the probability measure rho/mass().
  double mean() const;
  double variance() const;

  // Interval spanned (outer cell edges) by the cells whose averages exceed
  // the threshold; empty optional when no cell does.
  std::optional<std::pair<double, double>> support(double threshold) const;

 private:
  double a_, b_, h_;
  int num_cells_, degree_;
  std::vector<double> coeffs_;
};

}  // namespace cbo
