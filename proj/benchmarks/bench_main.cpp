#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sirlyap/levelset.hpp"
#include "sirlyap/lyap_en.hpp"
#include "sirlyap/ode.hpp"

namespace {

using namespace sirlyap;

EndemicLyapunov make_endemic() {
  EnLyapParams lp;
  lp.lambda_hat2 = 0.01;
  lp.k = 0.0902;
  lp.l_bar = 340.0;
  lp.lambda3 = 0.0;
  lp.lambda3 = 0.5 * lambda3_bound(endemic_example_params(), lp).bound;
  return EndemicLyapunov(endemic_example_params(), lp);
}

void BM_EndemicValue(benchmark::State& state) {
  const EndemicLyapunov v = make_endemic();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u1(-200.0, 300.0), u2(-250.0, 350.0), u3(-500.0, 500.0);
  std::vector<Deviation> pts;
  while (pts.size() < 4096) {
    const Deviation d{u1(rng), u2(rng), u3(rng)};
    if (v.in_H(d)) pts.push_back(d);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(v.value(pts[i++ & 4095]));
  }
}
BENCHMARK(BM_EndemicValue);

void BM_OmegaInverse(benchmark::State& state) {
  const EndemicLyapunov v = make_endemic();
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(v.omega_inv(s));
    s = s > 1000.0 ? 0.0 : s + 0.37;
  }
}
BENCHMARK(BM_OmegaInverse);

void BM_Rk4Integrate(benchmark::State& state) {
  const ModelParams p = endemic_example_params();
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate(p, State{400.0, 100.0, 100.0}, ConstantInput{p.b_hat}, t_end, 0.01, 1000));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(t_end / 0.01));
}
BENCHMARK(BM_Rk4Integrate)->Arg(100)->Arg(1000);

void BM_MarchingSquares(benchmark::State& state) {
  const EndemicLyapunov v = make_endemic();
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const State& xh = v.equilibrium().point;
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_contours(LyapunovFunction{v}, {20, 100, 180, 260, 340},
                                              Plane{}, Window{-xh.s, 400.0, -0.98 * xh.i, 420.0},
                                              Resolution{n, n}));
  }
}
BENCHMARK(BM_MarchingSquares)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
