// Serial references against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "rtsa/montecarlo.hpp"
#include "rtsa/proofcheck.hpp"

using namespace rtsa;

namespace {

montecarlo::EnsembleConfig ensemble_config() {
  montecarlo::EnsembleConfig c;
  c.problem.dim = 2;
  c.problem.root = {0.0, 0.0};
  c.problem.matrix = {1, 0, 0, 2};
  c.schedule = GainSchedule(1.0, 0.7);
  c.family.r0 = 1.0;
  c.x0 = {0.5, -0.5};
  c.n_steps = 2000;
  c.replicates = 512;
  c.base_seed = 3;
  c.checkpoints = {1000, 2000};
  return c;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto c = ensemble_config();
  for (auto _ : state) benchmark::DoNotOptimize(montecarlo::run_ensemble_serial(c));
  state.SetItemsProcessed(state.iterations() * c.replicates * c.n_steps);
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto c = ensemble_config();
  for (auto _ : state) benchmark::DoNotOptimize(montecarlo::run_ensemble(c, static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * c.replicates * c.n_steps);
}

struct NoiseSumFixture {
  proofcheck::Grid grid{1000, GainSchedule(1.0, 0.7)};
  Matrix q = Matrix::Identity(2, 2);
  std::size_t t = 0;
  proofcheck::ExponentialFactors factors;

  NoiseSumFixture() : t(grid.first_index_reaching(10.0)), factors(grid, q, t) {}
};

const NoiseSumFixture& noise_fixture() {
  static const NoiseSumFixture f;
  return f;
}

void BM_NoiseSumSerial(benchmark::State& state) {
  const auto& f = noise_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(proofcheck::noise_sum_covariance_serial(f.factors, f.t, 256, 1));
}

void BM_NoiseSumParallel(benchmark::State& state) {
  const auto& f = noise_fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        proofcheck::noise_sum_covariance(f.factors, f.t, 256, 1, static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NoiseSumSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NoiseSumParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
