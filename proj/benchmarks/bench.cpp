#include <benchmark/benchmark.h>

#include "blowup/blowup.hpp"

using namespace blowup;

namespace {

EquilibriumRecord uz_origin(const ChartSystem& sys) {
  for (const auto& e : find_equilibria(sys, EquilibriumSearch::InfinityOnly))
    if (e.chart == Chart::UZ && std::abs(e.location[0]) < 1e-12 && std::abs(e.location[1]) < 1e-12)
      return classify_spectrum(sys, e);
  throw NumericalError("NotFound", "no UZ origin");
}

void BM_IntegrateRiccatiLine(benchmark::State& state) {
  const auto sys = catalog_get("riccati").charts();
  const TimePath path = TimePath::line(0.0, cplx{3.0, 0.5});
  for (auto _ : state) {
    auto tr = integrate_path(sys, Chart::XY, {cplx{0.5, 0.0}, 0.0}, path);
    benchmark::DoNotOptimize(tr.samples.data());
  }
}
BENCHMARK(BM_IntegrateRiccatiLine);

void BM_FindEquilibria(benchmark::State& state) {
  const auto sys = catalog_get("galerkin_symmetric", {{"a", -0.5}}).charts();
  for (auto _ : state) benchmark::DoNotOptimize(find_equilibria(sys, EquilibriumSearch::All));
}
BENCHMARK(BM_FindEquilibria);

void BM_PoincareLinearize(benchmark::State& state) {
  const auto sys = catalog_get("galerkin_symmetric", {{"a", -0.5}}).charts();
  const auto eq = uz_origin(sys);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(poincare_linearize(sys, eq, order));
}
BENCHMARK(BM_PoincareLinearize)->Arg(4)->Arg(8)->Arg(12);

void BM_TreeCount(benchmark::State& state) {
  for (auto _ : state)
    for (int m = 2; m <= 30; ++m) benchmark::DoNotOptimize(tree_count(m));
}
BENCHMARK(BM_TreeCount);

void BM_ScalarDetour(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto sys = catalog_get("scalar_poly", {{"m", m}}).charts();
  const auto eq = uz_origin(sys);
  const auto approach = approach_blowup(sys, eq, {cplx{0.5, 0.0}, cplx{0.1, 0.0}});
  for (auto _ : state) benchmark::DoNotOptimize(masuda_detour(sys, eq, approach, 0.05, m - 1));
}
BENCHMARK(BM_ScalarDetour)->DenseRange(2, 4);

}  // namespace

BENCHMARK_MAIN();
