#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rqnl/entanglement.hpp"
#include "rqnl/nonlocality.hpp"
#include "rqnl/optimize.hpp"
#include "rqnl/rindler.hpp"
#include "rqnl/states.hpp"

using namespace rqnl;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix random_hermitian(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = n(rng);
    for (std::size_t j = i + 1; j < d; ++j) {
      m(i, j) = Complex(n(rng), n(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

DensityOperator damped_ghz(double r) {
  return apply_channel(DensityOperator::pure(gghz(StateParameter::gghz(kPi / 4))), Mode(3),
                       AccelerationParameter(r));
}

}  // namespace

static void BM_JacobiEigenvalues(benchmark::State& state) {
  const auto m = random_hermitian(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(m));
}
BENCHMARK(BM_JacobiEigenvalues)->RangeMultiplier(2)->Range(2, 16);

static void BM_ApplyChannel(benchmark::State& state) {
  const auto rho = DensityOperator::pure(gghz(StateParameter::gghz(kPi / 4)));
  const auto ch = build_channel(AccelerationParameter(0.4));
  for (auto _ : state) benchmark::DoNotOptimize(apply_channel(rho, Mode(static_cast<int>(state.range(0))), ch));
}
BENCHMARK(BM_ApplyChannel)->DenseRange(1, 3);

static void BM_SvetlichnyOperatorPath(benchmark::State& state) {
  const auto rho = damped_ghz(0.3);
  const SvetlichnySettings s{
      MeasurementDirection::from_angles(kPi / 2, 0.0),       MeasurementDirection::from_angles(kPi / 2, kPi / 2),
      MeasurementDirection::from_angles(kPi / 2, 0.0),       MeasurementDirection::from_angles(kPi / 2, kPi / 2),
      MeasurementDirection::from_angles(kPi / 2, -kPi / 4), MeasurementDirection::from_angles(kPi / 2, kPi / 4)};
  for (auto _ : state) benchmark::DoNotOptimize(svetlichny_expectation(rho, s));
}
BENCHMARK(BM_SvetlichnyOperatorPath);

static void BM_SvetlichnyTensorPath(benchmark::State& state) {
  const auto t = correlation_tensor(damped_ghz(0.3));
  const auto x = MeasurementDirection::from_angles(kPi / 2, 0.0).vector();
  const auto y = MeasurementDirection::from_angles(kPi / 2, kPi / 2).vector();
  const auto b = MeasurementDirection::from_angles(kPi / 2, -kPi / 4).vector();
  const auto bp = MeasurementDirection::from_angles(kPi / 2, kPi / 4).vector();
  for (auto _ : state) benchmark::DoNotOptimize(svetlichny_expectation(t, x, y, x, y, b, bp));
}
BENCHMARK(BM_SvetlichnyTensorPath);

static void BM_PiTangle(benchmark::State& state) {
  const auto rho = damped_ghz(kPi / 8);
  for (auto _ : state) benchmark::DoNotOptimize(pi_tangle(rho));
}
BENCHMARK(BM_PiTangle);

static void BM_MaximizeChsh(benchmark::State& state) {
  const auto rho = apply_channel(DensityOperator::pure(singlet()), Mode(2), AccelerationParameter(0.3));
  OptimizerConfig cfg;
  cfg.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maximize_chsh(rho, cfg));
}
BENCHMARK(BM_MaximizeChsh)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MaximizeSvetlichny(benchmark::State& state) {
  const auto rho = damped_ghz(0.3);
  OptimizerConfig cfg;
  cfg.restarts = 8;
  for (auto _ : state) benchmark::DoNotOptimize(maximize_svetlichny(rho, cfg));
}
BENCHMARK(BM_MaximizeSvetlichny)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
