#include <benchmark/benchmark.h>

#include <lamebethe/diffop.hpp>
#include <lamebethe/master.hpp>
#include <lamebethe/rootdata.hpp>
#include <lamebethe/solver.hpp>
#include <lamebethe/verify.hpp>

using namespace lamebethe;

namespace {

WeightSystem classical(int n, int l) {
  std::vector<Complex> z;
  std::vector<WeightRow> m;
  for (int s = 0; s < n; ++s) {
    z.emplace_back(-2.0 + 4.0 * s / std::max(n - 1, 1));
    m.push_back({0.0, 0.5 + 0.3 * s});
  }
  return WeightSystem::make(1, z, m, {l});
}

WeightSystem generic_r2() {
  return WeightSystem::make(2, {0.0, 1.0, Complex(-0.5, 0.7)},
                            {{0.3, -0.2, 0.1}, {0.7, 0.25, -0.4}, {-0.15, 0.6, 0.35}}, {2, 1});
}

const Coords& generic_point() {
  static const Coords t = solve_multistart(generic_r2(), 0, 7).orbits.front().coords;
  return t;
}

void BM_DDimension(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const auto l = Multidegree::make(std::vector<int>(r, 3));
  for (auto _ : state) benchmark::DoNotOptimize(d_dimension(3, r, l));
}
BENCHMARK(BM_DDimension)->DenseRange(1, 3);

void BM_BaeJacobian(benchmark::State& state) {
  const auto ws = generic_r2();
  for (auto _ : state) benchmark::DoNotOptimize(bae_jacobian(ws, generic_point()));
}
BENCHMARK(BM_BaeJacobian);

void BM_Stieltjes(benchmark::State& state) {
  const auto ws = classical(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_stieltjes_real(ws));
}
BENCHMARK(BM_Stieltjes)->Args({2, 5})->Args({4, 5})->Unit(benchmark::kMillisecond);

void BM_MultistartR2(benchmark::State& state) {
  const auto ws = generic_r2();
  SolveOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve_multistart(ws, 200, 7, opts));
}
BENCHMARK(BM_MultistartR2)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_FundamentalExact(benchmark::State& state) {
  const auto y = PolyTuple::from_coords(generic_point());
  for (auto _ : state) benchmark::DoNotOptimize(build_fundamental<GaussianRational>(generic_r2(), y));
}
BENCHMARK(BM_FundamentalExact)->Unit(benchmark::kMillisecond);

void BM_FundamentalFloat(benchmark::State& state) {
  const auto y = PolyTuple::from_coords(generic_point());
  for (auto _ : state) benchmark::DoNotOptimize(build_fundamental<Complex>(generic_r2(), y));
}
BENCHMARK(BM_FundamentalFloat);

void BM_FloatExponents(benchmark::State& state) {
  const auto ws = generic_r2();
  const auto op = build_fundamental<Complex>(ws, PolyTuple::from_coords(generic_point()));
  for (auto _ : state) benchmark::DoNotOptimize(compare_exponents(ws, op, ExponentKind::Fundamental));
}
BENCHMARK(BM_FloatExponents)->Unit(benchmark::kMillisecond);

void BM_Flag(benchmark::State& state) {
  const auto ws = generic_r2();
  const auto y = PolyTuple::from_coords(generic_point());
  const auto op = build_fundamental<Complex>(ws, y);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_flag(ws, y, op));
}
BENCHMARK(BM_Flag)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
