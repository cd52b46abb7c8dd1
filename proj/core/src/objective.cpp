#include "cbo/objective.hpp"

#include <cmath>

#include "cbo/errors.hpp"

namespace cbo {

double ackley(std::span<const double> x, double shift_b, double shift_c) {
  const double d = static_cast<double>(x.size());
  double sq = 0.0;
  double cs = 0.0;
  for (double xi : x) {
    const double y = xi - shift_b;
    sq += y * y;
    cs += std::cos(2.0 * M_PI * y);
  }
  return -20.0 * std::exp(-0.2 / std::sqrt(d) * std::sqrt(sq)) - std::exp(cs / d) + 20.0 + M_E +
         shift_c;
}

double rastrigin(std::span<const double> x, double shift_b, double shift_c) {
  const double d = static_cast<double>(x.size());
  double s = 0.0;
  for (double xi : x) {
    const double y = xi - shift_b;
    s += y * y - 10.0 * std::cos(2.0 * M_PI * y) + 10.0;
  }
  return s / d + shift_c;
}

double double_well(double x) {
  const double x2 = x * x;
  return 0.2 * x2 * x2 - 2.0 * x2 + 0.5 * x + 10.0;
}

Objective make_objective(const BenchmarkSpec& spec) {
  if (spec.dim < 1) throw ConfigError("benchmark dim must be >= 1");
  if (spec.family == BenchmarkFamily::DoubleWell && spec.dim != 1)
    throw ConfigError("double_well benchmark is 1D only");

  Objective obj;
  obj.dim = spec.dim;
  const double b = spec.shift_B;
  const double c = spec.shift_C;
  switch (spec.family) {
    case BenchmarkFamily::Ackley:
      obj.eval = [b, c](std::span<const double> x) { return ackley(x, b, c); };
      obj.known_minimizer = std::vector<double>(spec.dim, b);
      obj.known_min_value = c;
      break;
    case BenchmarkFamily::Rastrigin:
      obj.eval = [b, c](std::span<const double> x) { return rastrigin(x, b, c); };
      obj.known_minimizer = std::vector<double>(spec.dim, b);
      obj.known_min_value = c;
      break;
    case BenchmarkFamily::DoubleWell:
      obj.eval = [b, c](std::span<const double> x) { return double_well(x[0] - b) + c; };
      obj.known_minimizer = std::vector<double>{kDoubleWellArgmin + b};
      obj.known_min_value = kDoubleWellMinValue + c;
      break;
  }
  return obj;
}

BenchmarkFamily benchmark_family_from_name(std::string_view name) {
  if (name == "ackley") return BenchmarkFamily::Ackley;
  if (name == "rastrigin") return BenchmarkFamily::Rastrigin;
  if (name == "double_well") return BenchmarkFamily::DoubleWell;
  throw ConfigError("unknown benchmark family: " + std::string(name));
}

std::string benchmark_family_name(BenchmarkFamily family) {
  switch (family) {
    case BenchmarkFamily::Ackley: return "ackley";
    case BenchmarkFamily::Rastrigin: return "rastrigin";
    case BenchmarkFamily::DoubleWell: return "double_well";
  }
  return "unknown";
}

}  // namespace cbo
