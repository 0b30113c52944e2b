#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hillspec/oracle.hpp"
#include "hillspec/spectral.hpp"
#include "hillspec/variational.hpp"

using namespace hillspec;

namespace {

struct Example {
  const char* name;
  double lo, hi;
  double alpha;
};

// Grids and boundary conditions of the basic vs variational timing runs.
const Example kExamples[] = {{"mathieu", -0.4, 9.0, 0.0},
                             {"ex2", 2.2, 14.0, std::numbers::pi / 2},
                             {"ex3", 1.3, 37.4, 0.0},
                             {"ex4", 0.1, 9.2, std::numbers::pi / 2},
                             {"ex5", -0.42, 9.0, 0.0}};

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

// Basic coefficients only, at the level the ladder settles on.
void BM_DensityBasic(benchmark::State& state) {
  const Example& ex = kExamples[state.range(0)];
  const MeshHierarchy meshes(builtin(ex.name));
  const BoundaryCondition bc(ex.alpha);
  const auto lambdas = grid(ex.lo, ex.hi, 601);
  for (auto _ : state) {
    for (double l : lambdas) benchmark::DoNotOptimize(density_best_effort(meshes, bc, l, 1e-8));
  }
  state.SetLabel(ex.name);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lambdas.size()));
}
BENCHMARK(BM_DensityBasic)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

// The same grid with the four lambda-derivatives carried along.
void BM_DensityVariational(benchmark::State& state) {
  const Example& ex = kExamples[state.range(0)];
  const MeshHierarchy meshes(builtin(ex.name));
  const auto lambdas = grid(ex.lo, ex.hi, 601);
  for (auto _ : state) {
    for (double l : lambdas) {
      try {
        benchmark::DoNotOptimize(variational_monodromy(meshes, l, 1e-8));
      } catch (const ConvergenceError&) {
      }
    }
  }
  state.SetLabel(ex.name);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lambdas.size()));
}
BENCHMARK(BM_DensityVariational)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

// 101 points of the first Mathieu band, Dirichlet, tol 1e-8.
void shooting_grid(benchmark::State& state, ShootingMode mode) {
  LadderOptions opt;
  opt.mode = mode;
  const MeshHierarchy meshes(builtin("mathieu"), opt);
  const BoundaryCondition bc(0.0);
  const auto lambdas = grid(-0.3784, -0.3476, 101);
  for (auto _ : state) {
    for (double l : lambdas) benchmark::DoNotOptimize(density_best_effort(meshes, bc, l, 1e-8));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lambdas.size()));
}
void BM_SimpleShooting(benchmark::State& state) { shooting_grid(state, ShootingMode::simple); }
void BM_DoubleShooting(benchmark::State& state) {
  shooting_grid(state, ShootingMode::double_shooting);
}
BENCHMARK(BM_SimpleShooting)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DoubleShooting)->Unit(benchmark::kMillisecond);

void BM_SingleMesh(benchmark::State& state) {
  const StepMesh mesh = discretize(builtin("mathieu"), static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monodromy_on_mesh(mesh, 1.5, LadderOptions{}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SingleMesh)->RangeMultiplier(4)->Range(32, 8192)->Complexity(benchmark::oN);

void BM_ReferenceIntegrator(benchmark::State& state) {
  const auto p = builtin("mathieu");
  for (auto _ : state) benchmark::DoNotOptimize(integrate_reference(p, 1.5, 1e-10));
}
BENCHMARK(BM_ReferenceIntegrator)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
