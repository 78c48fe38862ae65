#include <map>

#include <benchmark/benchmark.h>

#include "balloon/dump.hpp"
#include "balloon/ordering.hpp"
#include "graphs.hpp"

namespace balloon::bench {
namespace {

const BlockGraph& graph_for(std::int64_t seconds, bool adapt) {
  static std::map<std::pair<std::int64_t, bool>, BlockGraph> cache;
  auto it = cache.find({seconds, adapt});
  if (it == cache.end()) it = cache.emplace(std::pair(seconds, adapt), simulated(network(4, seconds, adapt))).first;
  return it->second;
}

void BM_TotalOrderSingleView(benchmark::State& state) {
  const BlockGraph& g = graph_for(state.range(0), false);
  const ProtocolParams p = params_of(g);
  for (auto _ : state) benchmark::DoNotOptimize(total_order(g, p));
  state.counters["blocks"] = static_cast<double>(g.size());
}
BENCHMARK(BM_TotalOrderSingleView)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_TotalOrderAdaptive(benchmark::State& state) {
  const BlockGraph& g = graph_for(state.range(0), true);
  const ProtocolParams p = params_of(g);
  for (auto _ : state) benchmark::DoNotOptimize(total_order(g, p));
  state.counters["blocks"] = static_cast<double>(g.size());
  state.counters["views"] = static_cast<double>(g.views().size());
}
BENCHMARK(BM_TotalOrderAdaptive)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_SubtreeWeightsAll(benchmark::State& state) {
  const BlockGraph& g = graph_for(state.range(0), true);
  for (auto _ : state) {
    SubtreeIndex index(g);
    for (std::size_t i = 0; i < g.size(); ++i) benchmark::DoNotOptimize(index.weight(i));
  }
  state.counters["blocks"] = static_cast<double>(g.size());
}
BENCHMARK(BM_SubtreeWeightsAll)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ConfirmedPrefix(benchmark::State& state) {
  const BlockGraph& g = graph_for(state.range(0), true);
  const ProtocolParams p = params_of(g);
  for (auto _ : state) benchmark::DoNotOptimize(confirmed_prefix(g, p));
}
BENCHMARK(BM_ConfirmedPrefix)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace balloon::bench
