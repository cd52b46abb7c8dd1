#include <benchmark/benchmark.h>

#include <vector>

#include "cbo/consensus.hpp"
#include "cbo/density_field.hpp"
#include "cbo/meanfield.hpp"
#include "cbo/objective.hpp"
#include "cbo/particle_dynamics.hpp"
#include "cbo/rng.hpp"

namespace {

std::vector<double> random_positions(std::size_t n, int dim, std::uint64_t seed) {
  cbo::RandomStream rs(seed, 0);
  std::vector<double> x(n * dim);
  for (double& v : x) v = -3.0 + 6.0 * rs.uniform();
  return x;
}

void BM_ConsensusPoint(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const cbo::Objective f = cbo::make_objective({cbo::BenchmarkFamily::Ackley, 0.0, 0.0, dim});
  const std::vector<double> x = random_positions(n, dim, 42);
  std::vector<double> fv(n);
  for (std::size_t i = 0; i < n; ++i) fv[i] = f(std::span(x).subspan(i * dim, dim));
  for (auto _ : state) {
    auto v = cbo::consensus_point(x, dim, fv, 30.0);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ConsensusPoint)->Args({100, 1})->Args({1000, 1})->Args({100, 20})->Args({1000, 20});

void BM_ObjectiveEval(benchmark::State& state) {
  const int dim = 20;
  const bool rast = state.range(0) != 0;
  const cbo::Objective f = cbo::make_objective(
      {rast ? cbo::BenchmarkFamily::Rastrigin : cbo::BenchmarkFamily::Ackley, 0.0, 0.0, dim});
  const std::vector<double> x = random_positions(1, dim, 7);
  for (auto _ : state) benchmark::DoNotOptimize(f(x));
}
BENCHMARK(BM_ObjectiveEval)->Arg(0)->Arg(1);

void BM_EmStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const int dim = 20;
  const cbo::Objective f = cbo::make_objective({cbo::BenchmarkFamily::Rastrigin, 0.0, 0.0, dim});
  cbo::CboParams p;
  p.sigma = 5.0;
  p.alpha = 30.0;
  p.dt = 0.01;
  p.noise_mode = cbo::NoiseMode::Componentwise;
  cbo::ParticleEnsemble ens =
      cbo::make_ensemble({cbo::InitKind::UniformBox, {-3.0}, {3.0}}, n, dim, 99);
  for (auto _ : state) {
    cbo::em_step(ens, p, f);
    benchmark::DoNotOptimize(ens.positions.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EmStep)->Arg(100)->Arg(1000);

void BM_StrangStep(benchmark::State& state) {
  const cbo::Objective f = cbo::make_objective({cbo::BenchmarkFamily::Ackley, 0.0, 0.0, 1});
  cbo::CboParams p;
  p.sigma = 0.7;
  p.alpha = 40.0;
  cbo::MeanfieldParams mp;
  mp.num_cells = static_cast<int>(state.range(0));
  cbo::DensityField1D rho = cbo::DensityField1D::uniform(-3.0, 3.0, mp.num_cells, 1);
  const auto fields = cbo::compute_fields(rho, f, p);
  const double tau = cbo::step_size(fields, rho.h(), mp);
  for (auto _ : state) {
    auto next = cbo::strang_step(rho, f, p, tau, mp);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_StrangStep)->Arg(150)->Arg(600);

void BM_NormalDraw(benchmark::State& state) {
  cbo::RandomStream rs(2024, 3);
  for (auto _ : state) benchmark::DoNotOptimize(rs.normal());
}
BENCHMARK(BM_NormalDraw);

}  // namespace

BENCHMARK_MAIN();
