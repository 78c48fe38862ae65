#include <benchmark/benchmark.h>

#include "balloon/dump.hpp"
#include "balloon/sampling.hpp"
#include "balloon/validation.hpp"
#include "graphs.hpp"

namespace balloon::bench {
namespace {

void BM_SampleLatestBlocks(benchmark::State& state) {
  static const BlockGraph g = simulated(network(4, 200, true));
  const ProtocolParams p = params_of(g);
  const auto order = g.insertion_order();
  std::vector<Block> probes;
  for (std::size_t i = order.size() - 64; i < order.size(); ++i) probes.push_back(g.block(order[i]));
  for (auto _ : state) {
    for (const auto& b : probes) benchmark::DoNotOptimize(sample(g, b, p));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * probes.size()));
}
BENCHMARK(BM_SampleLatestBlocks);

void BM_ValidateRelaxed(benchmark::State& state) {
  static const BlockGraph g = simulated(network(4, 200, true));
  const ProtocolParams p = params_of(g);
  const auto order = g.insertion_order();
  std::vector<Block> probes;
  for (std::size_t i = order.size() - 64; i < order.size(); ++i) probes.push_back(g.block(order[i]));
  for (auto _ : state) {
    for (const auto& b : probes) benchmark::DoNotOptimize(validate_block(g, b, p, SampleCheck::Relaxed));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * probes.size()));
}
BENCHMARK(BM_ValidateRelaxed);

}  // namespace
}  // namespace balloon::bench
