// Properties over randomly generated graphs. Single-chain trees come from
// random_single_chain, multi-view graphs from short simulator runs.

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "balloon/dump.hpp"
#include "balloon/sampling.hpp"
#include "balloon/validation.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace balloon {
namespace {

const std::vector<BlockGraph>& corpus() {
  static const std::vector<BlockGraph> graphs = [] {
    std::vector<BlockGraph> out;
    out.push_back(testing::make_fig1().graph());
    for (std::uint64_t s = 0; s < 8; ++s) out.push_back(testing::random_single_chain(300 + s, 40 + 10 * s));
    for (std::uint64_t s = 0; out.size() < 24 && s < 100; ++s) {
      if (auto g = testing::random_multiview(50 + s, 100)) out.push_back(std::move(*g));
    }
    return out;
  }();
  return graphs;
}

TEST(Property, CorpusHasViewChanges) {
  std::size_t multi = 0;
  for (const auto& g : corpus()) {
    if (g.views().size() > 1) ++multi;
  }
  EXPECT_GE(multi, 10u);
}

TEST(Property, SameViewIsAnEquivalence) {
  std::mt19937_64 rng(1);
  for (const auto& g : corpus()) {
    const auto ids = g.insertion_order();
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    for (int i = 0; i < 400; ++i) {
      const Digest& a = ids[pick(rng)];
      const Digest& b = ids[pick(rng)];
      const Digest& c = ids[pick(rng)];
      EXPECT_TRUE(same_view(g, a, a));
      EXPECT_EQ(same_view(g, a, b), same_view(g, b, a));
      if (same_view(g, a, b) && same_view(g, b, c)) EXPECT_TRUE(same_view(g, a, c));
      EXPECT_EQ(same_view(g, a, b), g.record(a).view == g.record(b).view);
    }
  }
}

TEST(Property, ValidationIsDeterministicAndPure) {
  for (const auto& g : corpus()) {
    const ProtocolParams p = params_of(g);
    BlockGraph prefix(g.block(g.genesis_root()), g.hasher_ptr());
    for (const auto& id : g.insertion_order()) {
      if (id == g.genesis_root()) continue;
      const Block& b = g.block(id);
      const std::size_t before = prefix.size();
      const auto v1 = validate_block(prefix, b, p, SampleCheck::Relaxed);
      const auto v2 = validate_block(prefix, b, p, SampleCheck::Relaxed);
      EXPECT_EQ(v1.reason, v2.reason);
      EXPECT_EQ(v1.detail, v2.detail);
      EXPECT_EQ(prefix.size(), before);
      EXPECT_TRUE(v1.accepted()) << v1.detail;
      const auto e1 = validate_block(prefix, b, p, SampleCheck::Exact);
      EXPECT_EQ(e1.reason, validate_block(prefix, b, p, SampleCheck::Exact).reason);
      ASSERT_TRUE(accept_block(prefix, b, p, SampleCheck::Relaxed).inserted);
    }
  }
}

TEST(Property, MinedBlocksValidate) {
  std::mt19937_64 rng(2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    testing::GraphBuilder b(testing::single_view_params(), seed);
    std::vector<Digest> ids{b.g0()};
    std::uniform_int_distribution<int> gap(1, 30);
    for (int i = 0; i < 40; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
      b.advance(std::chrono::milliseconds(100 * gap(rng)));
      const Block blk = b.draft(Snapshot{{ids[pick(rng)]}});
      ASSERT_TRUE(validate_block(b.graph(), blk, b.params()).accepted());
      ids.push_back(b.graph().insert(blk));
    }
  }
  for (const auto& g : corpus()) {
    const ProtocolParams p = params_of(g);
    const OrderingResult r = order_graph(g, p);
    if (r.pending) continue;
    auto oracle = PowOracle::simulated(7);
    const Block blk = mine_block(g, r.tips, p, oracle, g.block(g.insertion_order().back()).timestamp, {"probe"});
    EXPECT_TRUE(validate_block(g, blk, p, SampleCheck::Exact).accepted());
    EXPECT_TRUE(std::find(r.tips.blocks.begin(), r.tips.blocks.end(), *blk.guider) != r.tips.blocks.end());
  }
}

TEST(Property, OrderSurvivesShuffledReplay) {
  std::mt19937_64 rng(3);
  for (const auto& g : corpus()) {
    const OrderedChain expected = total_order(g, params_of(g));
    for (int i = 0; i < 3; ++i) {
      const BlockGraph copy = testing::replay(g, testing::random_topological_order(g, rng));
      EXPECT_EQ(total_order(copy, params_of(copy)), expected);
    }
  }
}

TEST(Property, WeightIsConserved) {
  for (const auto& g : corpus()) {
    Rational total;
    for (const auto& id : g.insertion_order()) total += g.block(id).weight;
    SubtreeIndex index(g);
    EXPECT_EQ(index.weight(g.genesis_root()), total);
    if (g.views().size() > 1) continue;
    for (const auto& id : g.insertion_order()) {
      Rational sum = g.block(id).weight;
      for (const auto& c : g.children(id)) sum += index.weight(c);
      EXPECT_EQ(index.weight(id), sum);
    }
  }
}

TEST(Property, ClocksGrowAcrossOrderedViews) {
  for (const auto& g : corpus()) {
    const OrderingResult r = order_graph(g, params_of(g));
    for (std::size_t s = 0; s + 1 < r.segments.size(); ++s) {
      std::uint64_t max_old = 0;
      for (std::size_t p = r.segments[s].begin; p < r.segments[s].end; ++p) {
        max_old = std::max(max_old, g.block(r.chain.blocks[p]).clock);
      }
      for (std::size_t p = r.segments[s + 1].begin; p < r.segments[s + 1].end; ++p) {
        EXPECT_GT(g.block(r.chain.blocks[p]).clock, max_old);
      }
    }
  }
}

TEST(Property, SampleSetsAreWellFormed) {
  for (const auto& g : corpus()) {
    const ProtocolParams p = params_of(g);
    for (const auto& id : g.insertion_order()) {
      const Block& b = g.block(id);
      if (b.samples.empty()) continue;
      EXPECT_TRUE(std::is_sorted(b.samples.begin(), b.samples.end()));
      EXPECT_LE(b.samples.size(), p.sample_cap);
      const std::uint64_t clock = g.block(b.samples.front()).clock;
      for (const auto& s : b.samples) {
        EXPECT_EQ(g.block(s).clock, clock);
        EXPECT_LT(g.record(s).index, g.record(id).index);
      }
      EXPECT_LE(clock + p.min_clock_gap + 1, b.clock);
      const auto ref = find_reference(g, b, p);
      ASSERT_TRUE(ref);
      EXPECT_TRUE(std::binary_search(b.samples.begin(), b.samples.end(), *ref));
    }
  }
}

TEST(Property, SubChainIdsMatchBigIntegerReduction) {
  for (const auto& g : corpus()) {
    for (const auto& id : g.insertion_order()) {
      const BlockRecord& r = g.record(id);
      EXPECT_EQ(r.chain, testing::bigint_mod(r.chain_hash, g.view(r.view).chain_count));
      EXPECT_EQ(r.block.clock, testing::guider_depth(g, id));
    }
  }
}

}  // namespace
}  // namespace balloon
