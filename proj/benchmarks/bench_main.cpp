#include <benchmark/benchmark.h>

#include "wql/inequalities.hpp"

namespace {

void BM_SolveW1(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto g = wql::make_grid_measure(2, 64);
  const auto pts = wql::gen_point_set(wql::PointSetKind::midpoint_grid, 2,
                                      static_cast<std::size_t>(k) * k, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wql::solve_w1(pts, g).value);
  }
}
BENCHMARK(BM_SolveW1)->Arg(2)->Arg(4)->Arg(8);

void BM_SolveWinf(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto g = wql::make_grid_measure(2, 64);
  const auto pts = wql::gen_point_set(wql::PointSetKind::midpoint_grid, 2,
                                      static_cast<std::size_t>(k) * k, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wql::solve_winf(pts, g).value);
  }
}
BENCHMARK(BM_SolveWinf)->Arg(2)->Arg(4)->Arg(8);

void BM_LorentzNorm(benchmark::State& state) {
  const auto g = wql::make_grid_measure(2, static_cast<int>(state.range(0)));
  const auto pts = wql::gen_point_set(wql::PointSetKind::midpoint_grid, 2, 16, 0);
  wql::FieldFamily fam;
  fam.kind = wql::FieldKind::extremal_eps;
  fam.eps = 0.05;
  const auto f = wql::build_field(fam, g.geom, &pts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wql::lorentz_d1(f.grad_mag, f.geom.cell_volume(), 2));
  }
}
BENCHMARK(BM_LorentzNorm)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
