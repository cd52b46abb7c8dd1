#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbo {

// A black-box objective. Evaluation must be deterministic and thread-safe
// (pure); the optimizer never sees derivatives.
struct Objective {
  std::function<double(std::span<const double>)> eval;
  int dim = 1;
  std::optional<std::vector<double>> known_minimizer;
  std::optional<double> known_min_value;

  double operator()(std::span<const double> x) const { return eval(x); }
};

enum class BenchmarkFamily { Ackley, Rastrigin, DoubleWell };

// Benchmark selection: family plus argument shift B (minimizer moves to B·1)
// and value shift C.
struct BenchmarkSpec {
  BenchmarkFamily family = BenchmarkFamily::Ackley;
  double shift_B = 0.0;
  double shift_C = 0.0;
  int dim = 1;
};

double ackley(std::span<const double> x, double shift_b, double shift_c);
double rastrigin(std::span<const double> x, double shift_b, double shift_c);
double double_well(double x);

// Global minimizer of the double-well and its value, to full precision
// (root of 0.8x^3 - 4x + 0.5).
inline constexpr double kDoubleWellArgmin = -2.2961266364110364;
inline constexpr double kDoubleWellMinValue = 3.8667549809096018;

// Builds the callable objective with its known minimizer attached.
// DoubleWell requires dim == 1; B/C shifts apply to every family.
Objective make_objective(const BenchmarkSpec& spec);

BenchmarkFamily benchmark_family_from_name(std::string_view name);
std::string benchmark_family_name(BenchmarkFamily family);

}  // namespace cbo
