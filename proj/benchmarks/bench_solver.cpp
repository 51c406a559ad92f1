#include <benchmark/benchmark.h>

#include <random>

#include "precess/basis.hpp"
#include "precess/operators.hpp"
#include "precess/timestepper.hpp"

using namespace precess;

namespace {

const Domain kSpheroid = Domain::spheroid(0.5625);
const Domain kTriaxial = Domain::ellipsoid(1, 0.9, 0.8);

OperatorSet poincare_ops(const Basis& b) {
  return assemble(b, BCSpec::with_data(BCForm::poincare_stress, poincare_field(0.5625, 0.25)), 1 / 0.024, 0.25);
}

}  // namespace

static void BM_BuildBasis(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_basis(kTriaxial, N));
}
BENCHMARK(BM_BuildBasis)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State& state) {
  const Basis b = build_basis(kSpheroid, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(poincare_ops(b));
  state.counters["dim"] = b.dim();
}
BENCHMARK(BM_Assemble)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

static void BM_Step(benchmark::State& state) {
  const Basis b = build_basis(kSpheroid, static_cast<int>(state.range(0)));
  const OperatorSet ops = poincare_ops(b);
  const Stepper st(ops, 0.01);
  Eigen::VectorXd c0(ops.dim);
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (auto& v : c0) v = 1e-3 * g(rng);
  State s = st.start(0.0, project(poincare_field(0.5625, 0.25), b).coeffs + c0);
  for (auto _ : state) st.step(s);
  state.counters["dim"] = ops.dim;
}
BENCHMARK(BM_Step)->DenseRange(1, 6)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
