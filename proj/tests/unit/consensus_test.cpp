#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "cbo/consensus.hpp"
#include "cbo/density_field.hpp"
#include "cbo/errors.hpp"
#include "cbo/objective.hpp"
#include "cbo/rng.hpp"

namespace {

// Direct long-double reference with explicit shift, simple serial loop.
std::vector<long double> direct_consensus(const std::vector<double>& x, std::size_t dim,
                                          const std::vector<double>& f, double alpha) {
  const std::size_t n = f.size();
  long double fmin = f[0];
  for (double v : f) fmin = std::min<long double>(fmin, v);
  long double wsum = 0.0L;
  std::vector<long double> num(dim, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    const long double w = std::exp((long double)(-alpha) * ((long double)f[i] - fmin));
    wsum += w;
    for (std::size_t j = 0; j < dim; ++j) num[j] += w * x[i * dim + j];
  }
  for (auto& v : num) v /= wsum;
  return num;
}

}  // namespace

TEST_SUITE("consensus") {

TEST_CASE("two-point pinned value at alpha=40") {
  const std::vector<double> x = {0.0, 1.0};
  const std::vector<double> f = {0.0, 1.0};
  const auto v = cbo::consensus_point(x, 1, f, 40.0);
  CHECK(v.location[0] == doctest::Approx(4.248354255291589e-18).epsilon(1e-12));
  CHECK(v.alpha == 40.0);
}

TEST_CASE("log normalizer identity on a two-point sample") {
  const std::vector<double> x = {0.0, 1.0};
  const std::vector<double> f = {0.0, 1.0};
  const auto v = cbo::consensus_point(x, 1, f, 1.0);
  CHECK(v.log_normalizer == doctest::Approx(std::log1p(std::exp(-1.0))).epsilon(1e-14));
}

TEST_CASE("alpha -> 0 recovers the plain mean") {
  cbo::RandomStream rs(5, 0);
  std::vector<double> x(200), f(200);
  double mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 6.0 * rs.uniform() - 3.0;
    f[i] = rs.uniform();
    mean += x[i];
  }
  mean /= static_cast<double>(x.size());
  const auto v = cbo::consensus_point(x, 1, f, 1e-13);
  CHECK(v.location[0] == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("adding a constant to f leaves the location unchanged") {
  cbo::RandomStream rs(6, 0);
  std::vector<double> x(64 * 3), f(64), g(64);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = rs.uniform();
    g[i] = f[i] + 37.5;
  }
  for (double& v : x) v = rs.normal();
  const auto a = cbo::consensus_point(x, 3, f, 12.0);
  const auto b = cbo::consensus_point(x, 3, g, 12.0);
  for (int j = 0; j < 3; ++j)
    CHECK(a.location[j] == doctest::Approx(b.location[j]).epsilon(1e-14));
}

TEST_CASE("consensus stays in the coordinate-wise convex hull") {
  cbo::RandomStream rs(9, 0);
  const std::size_t n = 50;
  const std::size_t dim = 4;
  std::vector<double> x(n * dim), f(n);
  for (double& v : x) v = 10.0 * rs.normal();
  for (double& v : f) v = rs.uniform();
  for (double alpha : {0.1, 1.0, 40.0, 1e4}) {
    const auto v = cbo::consensus_point(x, dim, f, alpha);
    for (std::size_t j = 0; j < dim; ++j) {
      double lo = x[j], hi = x[j];
      for (std::size_t i = 0; i < n; ++i) {
        lo = std::min(lo, x[i * dim + j]);
        hi = std::max(hi, x[i * dim + j]);
      }
      CHECK(v.location[j] >= lo - 1e-12);
      CHECK(v.location[j] <= hi + 1e-12);
    }
  }
}

TEST_CASE("particle order does not matter") {
  cbo::RandomStream rs(10, 0);
  const std::size_t n = 33;
  std::vector<double> x(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rs.normal();
    f[i] = rs.uniform();
  }
  const auto a = cbo::consensus_point(x, 1, f, 7.0);
  std::vector<double> xr(x.rbegin(), x.rend()), fr(f.rbegin(), f.rend());
  const auto b = cbo::consensus_point(xr, 1, fr, 7.0);
  CHECK(a.location[0] == doctest::Approx(b.location[0]).epsilon(1e-13));
}

TEST_CASE("stable at alpha * spread(f) = 700") {
  cbo::RandomStream rs(11, 0);
  const std::size_t n = 1000;
  const double alpha = 7000.0;
  std::vector<double> x(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 6.0 * rs.uniform() - 3.0;
    f[i] = 5.0 + 0.1 * rs.uniform();  // alpha * (f - fmin) spans ~[0, 700]
  }
  const auto v = cbo::consensus_point(x, 1, f, alpha);
  REQUIRE(std::isfinite(v.location[0]));
  const auto ref = direct_consensus(x, 1, f, alpha);
  CHECK(v.location[0] == doctest::Approx((double)ref[0]).epsilon(1e-9));
}

TEST_CASE("large alpha concentrates on the argmin particle") {
  cbo::RandomStream rs(12, 0);
  const std::size_t n = 40;
  std::vector<double> x(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i);
    f[i] = 1.0 + 0.01 * static_cast<double>((i * 7 + 3) % n);  // distinct, gaps >= 0.01
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (f[i] < f[best]) best = i;
  const auto v = cbo::consensus_point(x, 1, f, 1e4);
  CHECK(std::fabs(v.location[0] - x[best]) < 1e-6 * (1.0 + std::fabs(x[best])));
}

TEST_CASE("input validation") {
  std::vector<double> x = {0.0, 1.0}, f = {0.0, 1.0};
  CHECK_THROWS_AS((void)cbo::consensus_point({}, 1, {}, 1.0), cbo::ConfigError);
  CHECK_THROWS_AS((void)cbo::consensus_point(x, 1, f, 0.0), cbo::ConfigError);
  CHECK_THROWS_AS((void)cbo::consensus_point(x, 1, f, -2.0), cbo::ConfigError);
  CHECK_THROWS_AS((void)cbo::consensus_point(x, 3, f, 1.0), cbo::ConfigError);
  std::vector<double> fbad = {0.0, std::nan("")};
  CHECK_THROWS_AS((void)cbo::consensus_point(x, 1, fbad, 1.0), cbo::ConfigError);
}

TEST_CASE("density consensus: symmetry and the small-alpha limit") {
  const cbo::DensityField1D rho = cbo::DensityField1D::uniform(-1.0, 1.0, 64, 1);
  cbo::Objective f;
  f.dim = 1;
  f.eval = [](std::span<const double> x) { return x[0] * x[0]; };
  CHECK(std::fabs(cbo::consensus_point_density(rho, f, 3.0)) < 1e-12);
  cbo::Objective g;
  g.dim = 1;
  g.eval = [](std::span<const double> x) { return std::sin(3.0 * x[0]) + 2.0; };
  CHECK(cbo::consensus_point_density(rho, g, 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("density consensus matches a fine midpoint reference on the double well") {
  const double alpha = 40.0;
  const cbo::Objective f = cbo::make_objective({cbo::BenchmarkFamily::DoubleWell, 0.0, 0.0, 1});
  const cbo::DensityField1D rho = cbo::DensityField1D::uniform(-3.0, 3.0, 600, 1);
  const double got = cbo::consensus_point_density(rho, f, alpha);

  const int m = 200000;
  long double num = 0.0L, den = 0.0L;
  const long double fmin = cbo::kDoubleWellMinValue;
  for (int i = 0; i < m; ++i) {
    const double x = -3.0 + 6.0 * (i + 0.5) / m;
    const long double w = expl(-(long double)alpha * ((long double)cbo::double_well(x) - fmin));
    num += w * x;
    den += w;
  }
  const double ref = static_cast<double>(num / den);
  CHECK(got == doctest::Approx(ref).epsilon(1e-6));
  CHECK(std::fabs(got - cbo::kDoubleWellArgmin) < 0.05);
}

}  // TEST_SUITE
