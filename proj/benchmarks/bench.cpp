// Micro benchmarks of the inner loops: noise sampling, the bit-sliced 1D
// engine and the bit-sliced toric engine.
#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "hfca/rng.hpp"
#include "hfca/simulator.hpp"
#include "hfca/tsirelson.hpp"

using namespace hfca;

static void bm_bernoulli_stream(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0)) * 1e-4;
  BernoulliStream stream(p);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(stream.next(rng));
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(bm_bernoulli_stream)->Arg(1)->Arg(100)->Arg(1000);

static void bm_sliced1d_run(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Sliced1D engine(build_tsirelson(Kind1D::X, n, Variant1D::Original));
  Noise1D noise;
  noise.wire.p = 0.01;
  Sliced1D::Streams streams(noise);
  Rng rng(2);
  std::vector<std::uint64_t> words(engine.width(), 0);
  for (auto _ : state) {
    engine.run(words, noise, streams, rng);
    benchmark::DoNotOptimize(words.data());
  }
  state.SetItemsProcessed(state.iterations() * 64 * engine.width() * engine.depth());
}
BENCHMARK(bm_sliced1d_run)->DenseRange(2, 5);

static void bm_toric_engine_run(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const auto compiled = std::make_shared<const CompiledSchedule>(*ec_layer_schedule(s, 9 * s));
  ToricEngine engine(compiled, NoiseModel::single(NoiseKind::Qubit, 1e-3));
  SlicedState st(*compiled);
  Rng rng(3);
  for (auto _ : state) {
    engine.run(st, rng);
    benchmark::DoNotOptimize(st.links.data());
  }
  state.SetItemsProcessed(state.iterations() * 64 * compiled->depth() * compiled->num_links());
}
BENCHMARK(bm_toric_engine_run)->Arg(1)->Arg(2);

BENCHMARK_MAIN();
