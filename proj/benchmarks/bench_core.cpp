#include <benchmark/benchmark.h>

#include <numbers>

#include "hfanova/bessel.hpp"
#include "hfanova/covariance_model.hpp"
#include "hfanova/fanova.hpp"
#include "hfanova/gaussian_simulation.hpp"
#include "hfanova/gls_estimator.hpp"
#include "hfanova/scenario.hpp"
#include "hfanova/spectral_basis.hpp"

using namespace hfanova;

static void BM_BesselZeros(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bessel_j_zeros(1.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BesselZeros)->Arg(10)->Arg(80);

static void BM_RectangleBasis(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_basis(Rectangle{-2, 3, -2, 3}, {0.05, 0.05}, RectangleTruncation{4, 4}));
  }
}
BENCHMARK(BM_RectangleBasis)->Unit(benchmark::kMillisecond);

static void BM_DiskBasis(benchmark::State& state) {
  const double r = 25.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_basis(Disk{r}, {r / 145, 2 * std::numbers::pi / 135},
                                         CircularTruncation{static_cast<int>(state.range(0))}));
  }
}
BENCHMARK(BM_DiskBasis)->Arg(7)->Arg(31)->Unit(benchmark::kMillisecond);

static void BM_GlsSolver(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto X = make_design(n, 4, 1);
  Eigen::VectorXd ev(16);
  for (int k = 0; k < 16; ++k) ev[k] = 20.0 + 10.0 * k;
  const auto lambdas = lambda_theoretical(ev, default_gamma(n));
  for (auto _ : state) benchmark::DoNotOptimize(GlsSolver(X, lambdas));
}
BENCHMARK(BM_GlsSolver)->Arg(150)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Replicate(benchmark::State& state) {
  auto config = find_scenario("rectangle", "P1,a,C1");
  const auto setup = prepare(config);
  const GlsSolver solver(setup.X, setup.lambdas);
  const auto w = build_w(setup.lambdas);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const Eigen::MatrixXd y = simulate_response(setup, ++seed);
    benchmark::DoNotOptimize(fit(solver, y));
    benchmark::DoNotOptimize(decompose(solver, y, w));
  }
}
BENCHMARK(BM_Replicate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
