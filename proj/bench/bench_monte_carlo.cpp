#include <benchmark/benchmark.h>

#include "mmwce/baseline_omp.hpp"
#include "mmwce/channel_model.hpp"
#include "mmwce/esprit.hpp"
#include "mmwce/metrics.hpp"
#include "mmwce/monte_carlo.hpp"
#include "mmwce/reconstruction.hpp"
#include "mmwce/training.hpp"

using namespace mmwce;

namespace {

struct Fixture {
  SystemConfig cfg;
  training::TrainingPlan plan = training::aggregate_training(cfg);
  CMatrix h;
  training::EffectiveChannel eff;

  Fixture() {
    Rng rng = make_stream(1, StreamTag::kPaths, 0);
    h = channel::assemble_channel(channel::draw_paths(cfg, rng), cfg);
    Rng noise = make_stream(1, StreamTag::kUplinkNoise, 0);
    eff = training::estimate_effective_channel(training::simulate_uplink(h, plan, 0.1, noise), plan);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_EspritAngles(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(esprit::estimate_angles(f.eff.h_bar, {13, 13, 5, 0.5}));
}
BENCHMARK(BM_EspritAngles)->Unit(benchmark::kMillisecond);

void BM_EspritSubspace(benchmark::State& state) {
  const Fixture& f = fixture();
  esprit::EspritWorkspace ws;
  esprit::estimate_angles(f.eff.h_bar, {13, 13, 5, 0.5}, &ws);
  for (auto _ : state) benchmark::DoNotOptimize(esprit::signal_subspace(ws.real_form, 5));
}
BENCHMARK(BM_EspritSubspace)->Unit(benchmark::kMillisecond);

void BM_EspritFullChain(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    const esprit::AngleEstimates a = esprit::estimate_angles(f.eff.h_bar, {13, 13, 5, 0.5});
    const CVector d = reconstruction::estimate_gains(f.eff, a, f.plan, f.cfg);
    benchmark::DoNotOptimize(reconstruction::reconstruct_channel(a, d, f.cfg));
  }
}
BENCHMARK(BM_EspritFullChain)->Unit(benchmark::kMillisecond);

void BM_OmpCorrelate(benchmark::State& state) {
  const Fixture& f = fixture();
  const omp::GridDictionary d = omp::build_dictionary(f.cfg, 150, f.plan);
  for (auto _ : state) benchmark::DoNotOptimize(omp::correlate(d, f.eff.h_bar));
}
BENCHMARK(BM_OmpCorrelate)->Unit(benchmark::kMicrosecond);

void BM_OmpEstimate(benchmark::State& state) {
  const Fixture& f = fixture();
  const omp::GridDictionary d = omp::build_dictionary(f.cfg, 150, f.plan);
  for (auto _ : state) benchmark::DoNotOptimize(omp::omp_estimate(f.eff, d, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_OmpEstimate)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_SvdBeamformers(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(metrics::svd_beamformers(f.h, 4));
}
BENCHMARK(BM_SvdBeamformers)->Unit(benchmark::kMillisecond);

void BM_Ber16Qam(benchmark::State& state) {
  const Fixture& f = fixture();
  const metrics::SvdBeamformers bf = metrics::svd_beamformers(f.h, 4);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::ber_16qam(f.h, f.h, bf, 0.1, rng, 100));
}
BENCHMARK(BM_Ber16Qam)->Unit(benchmark::kMillisecond);

mc::ExperimentConfig sweep_config(int jobs) {
  mc::ExperimentConfig exp;
  exp.system.n_trials = 8;
  exp.system.snr_db_grid = {0, 20};
  exp.omp_iterations = 20;
  exp.ber_symbols = 20;
  exp.jobs = jobs;
  return exp;
}

void BM_TrialsSerial(benchmark::State& state) {
  const mc::ExperimentConfig exp = sweep_config(1);
  for (auto _ : state) benchmark::DoNotOptimize(mc::run_trials_serial(exp));
}
BENCHMARK(BM_TrialsSerial)->Unit(benchmark::kMillisecond);

void BM_TrialsParallel(benchmark::State& state) {
  const mc::ExperimentConfig exp = sweep_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mc::run_trials(exp));
}
BENCHMARK(BM_TrialsParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
