#include <benchmark/benchmark.h>

#include "mmsched/moments.hpp"
#include "mmsched/optimizer.hpp"
#include "mmsched/oracle.hpp"
#include "mmsched/se_analytic.hpp"

using namespace mmsched;

namespace {

const MomentTable& table() {
  static const MomentTable t = build_table(3.5, InterferenceMode::Average, {}, 100000, 1);
  return t;
}

}  // namespace

static void BM_SinrCollapsed(benchmark::State& state) {
  const InterferenceProfile profile(table(), table().offsets(), 3);
  const auto scheme = static_cast<Scheme>(state.range(0));
  int k = 1;
  for (auto _ : state) {
    const double v = scheme == Scheme::Mrc ? sinr_mrc(profile, 10000, k, 0.1)
                                           : sinr_pzfc(profile, 10000, k, 0.1);
    benchmark::DoNotOptimize(v);
    k = k % 300 + 1;
  }
}
BENCHMARK(BM_SinrCollapsed)
    ->Arg(static_cast<int>(Scheme::Mrc))
    ->Arg(static_cast<int>(Scheme::Pzfc));

static void BM_SinrGeneric(benchmark::State& state) {
  const auto cells = cells_within(2);
  const MomentTable t = table().restricted(cells);
  NetworkConfig c;
  c.n_users = static_cast<int>(state.range(0));
  c.n_antennas = 500;
  const SinrInputs in = make_inputs(c, t, Scheme::Pzfc);
  for (auto _ : state) benchmark::DoNotOptimize(sinr_pzfc_generic(in));
}
BENCHMARK(BM_SinrGeneric)->Arg(2)->Arg(8);

static void BM_MomentAverage(benchmark::State& state) {
  Rng rng = make_stream(1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        compute_moment({2, 1}, 3.5, 1, InterferenceMode::Average, state.range(0), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MomentAverage)->Arg(10000);

static void BM_SweepSlice(benchmark::State& state) {
  SweepSpec spec;
  spec.n_grid = {static_cast<int>(state.range(0))};
  spec.modes = {InterferenceMode::Average};
  const MomentTables tables{{InterferenceMode::Average, table()}};
  for (auto _ : state) benchmark::DoNotOptimize(sweep(NetworkConfig{}, spec, tables));
}
BENCHMARK(BM_SweepSlice)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_OracleRealization(benchmark::State& state) {
  NetworkConfig c;
  c.n_antennas = static_cast<int>(state.range(0));
  c.n_users = 2;
  const OracleSetup s = make_cluster(c, 1, InterferenceMode::Average);
  Rng rng = make_stream(2, 0);
  for (auto _ : state) {
    const Realization r = generate(s, rng);
    const EstimationOutput est = estimate_channels(s, r);
    benchmark::DoNotOptimize(combine(est, Scheme::Pzfc, 1));
  }
}
BENCHMARK(BM_OracleRealization)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
