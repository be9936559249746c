#include <benchmark/benchmark.h>

#include "urykit/extension_space.hpp"
#include "urykit/generators.hpp"
#include "urykit/stabilizer.hpp"
#include "urykit/urysohn.hpp"

namespace urykit {
namespace {

const std::vector<Rat> kValues = value_grid(6, 2);

void BM_Closure(benchmark::State& state) {
  Rng rng(11);
  const auto n = static_cast<std::size_t>(state.range(0));
  const FinMetric x = random_metric(rng, n, kValues);
  const ExtensionSpec spec = random_spec(rng, x, 3, kValues);
  ExtensionGraph graph(x, spec.pattern);
  const auto dom = all_points(n);
  for (std::size_t i = 0; i < spec.pattern.size(); ++i) {
    graph.add(i, KatetovMap(dom, spec.cross[i]));
    for (int extra = 0; extra < 3; ++extra) graph.add(i, random_katetov(rng, x, dom, kValues, true));
  }
  for (auto _ : state) benchmark::DoNotOptimize(closure_metric(graph));
}
BENCHMARK(BM_Closure)->Arg(3)->Arg(6)->Arg(10);

void BM_Dbar(benchmark::State& state) {
  Rng rng(12);
  const FinMetric x = random_metric(rng, 2, kValues);
  const FinMetric pattern = random_metric(rng, static_cast<std::size_t>(state.range(0)), kValues);
  ExtensionGraph graph(x, pattern);
  const auto dom = all_points(2);
  const KatetovMap f = random_katetov(rng, x, dom, kValues, true);
  const KatetovMap g = random_katetov(rng, x, dom, kValues, true);
  for (auto _ : state) benchmark::DoNotOptimize(dbar_exact(graph, f, 0, g, 1));
}
BENCHMARK(BM_Dbar)->Arg(2)->Arg(3);

void BM_Realize(benchmark::State& state) {
  Rng rng(13);
  const auto n = static_cast<std::size_t>(state.range(0));
  const FinMetric x = random_metric(rng, n, kValues);
  const KatetovMap f = random_katetov(rng, x, all_points(n), kValues, true);
  for (auto _ : state) {
    GrowingSpace s(x);
    benchmark::DoNotOptimize(realize_katetov(s, f));
  }
}
BENCHMARK(BM_Realize)->Arg(4)->Arg(8)->Arg(16);

void BM_Descent(benchmark::State& state) {
  const auto values = value_grid(6, 2);
  for (auto _ : state) {
    state.PauseTiming();
    Rng rng(14);
    StabilizerInstance inst = random_instance(rng, random_shape(rng, 3), values, Rat(1, 100));
    const Rat delta(1, 200);
    state.ResumeTiming();
    deflatten(inst, delta);
    inst.epsilon = delta;
    benchmark::DoNotOptimize(descend(inst));
  }
}
BENCHMARK(BM_Descent)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace urykit

BENCHMARK_MAIN();
