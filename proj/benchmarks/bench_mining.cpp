#include <benchmark/benchmark.h>

#include "balloon/dump.hpp"
#include "balloon/merkle.hpp"
#include "balloon/mining.hpp"
#include "balloon/ordering.hpp"
#include "graphs.hpp"

namespace balloon::bench {
namespace {

void BM_MerkleRoot(benchmark::State& state) {
  const auto hasher = sha256_hasher();
  std::vector<Digest> leaves(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < leaves.size(); ++i) leaves[i].bytes[0] = static_cast<std::uint8_t>(i);
  for (auto _ : state) benchmark::DoNotOptimize(merkle_root(leaves, *hasher));
}
BENCHMARK(BM_MerkleRoot)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_MineBlock(benchmark::State& state) {
  static const BlockGraph g = simulated(network(4, 200, true));
  const ProtocolParams p = params_of(g);
  const Snapshot tips = latest_main_blocks(g, p);
  auto oracle = PowOracle::simulated(1);
  const Timestamp now = g.block(g.insertion_order().back()).timestamp;
  for (auto _ : state) benchmark::DoNotOptimize(mine_block(g, tips, p, oracle, now, {"tx"}));
  state.counters["chains"] = static_cast<double>(tips.blocks.size());
}
BENCHMARK(BM_MineBlock);

void BM_GrindDifficulty(benchmark::State& state) {
  ProtocolParams p;
  p.diff_required = state.range(0);
  BlockGraph g(make_initial_genesis(p));
  auto oracle = PowOracle::grind();
  const Snapshot tips{{g.genesis_root()}};
  for (auto _ : state) benchmark::DoNotOptimize(mine_block(g, tips, p, oracle, Timestamp(0)));
}
BENCHMARK(BM_GrindDifficulty)->Arg(1)->Arg(16)->Arg(256);

}  // namespace
}  // namespace balloon::bench
