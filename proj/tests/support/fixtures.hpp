#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "balloon/adjustment.hpp"
#include "balloon/graph.hpp"
#include "balloon/mining.hpp"
#include "balloon/ordering.hpp"
#include "balloon/params.hpp"
#include "balloon/sim/scenario.hpp"

namespace balloon::testing {

/// Parameters under which no epoch completes in a small graph, so there is
/// never a view change.
ProtocolParams single_view_params();

/// Small-graph parameters: epochs of two clocks, reference one clock back and
/// one second old, r0 = 1/2.
ProtocolParams fig1_params();

/// Mines real blocks into a graph with a controlled clock. Every block goes
/// through accept_block with the exact sample check.
class GraphBuilder {
 public:
  explicit GraphBuilder(ProtocolParams params, std::uint64_t seed = 1, Timestamp step = std::chrono::seconds(10));

  BlockGraph& graph() { return g_; }
  const BlockGraph& graph() const { return g_; }
  const ProtocolParams& params() const { return params_; }
  Digest g0() const { return g_.genesis_root(); }
  Timestamp now() const { return now_; }
  void advance(Timestamp dt) { now_ += dt; }

  /// Normal block on a snapshot. The sub-chain is whatever the hash picks.
  Digest mine(const Snapshot& snapshot, std::vector<std::string> payload = {});
  /// Single-entry snapshot: parent and guider are both `parent`.
  Digest mine_on(const Digest& parent, std::vector<std::string> payload = {});
  /// Normal block whose chain hash selects snapshot entry `sid`.
  Digest mine_for_chain(const Snapshot& snapshot, std::uint32_t sid);
  /// Genesis for the view opened by `anchors`; with `sid` set, retries until
  /// the genesis maps to that sub-chain of a view with `next_count` chains.
  Digest genesis(const std::vector<Digest>& anchors, const std::vector<Digest>& known,
                 std::optional<std::uint32_t> sid = std::nullopt, std::uint32_t next_count = 1);

  /// Builds without inserting.
  Block draft(const Snapshot& snapshot, std::vector<std::string> payload = {});

 private:
  Digest commit(Block b);

  ProtocolParams params_;
  BlockGraph g_;
  PowOracle oracle_;
  Timestamp step_;
  Timestamp now_{0};
  std::uint64_t tag_ = 0;
};

/// Single chain that changes view every two clocks, then splits in two.
///
///   view 1: g0 <- b1 (anchor) <- c2 (grey)
///   view 2: G (anchors {b1}) <- x3 (anchor) <- y4 (grey)
///   view 3: H0, H1 (anchors {x3}), one normal block per sub-chain
///
/// View 3's first epoch votes high as well, so z0 and h1 anchor a pending
/// fourth view and z1 is grey.
struct Fig1Fixture {
  GraphBuilder builder{fig1_params()};
  Digest g0, b1, c2, G, x3, y4;
  Digest h0, h1;  ///< geneses of view 3 by sub-chain id
  Digest z0, z1;  ///< normal blocks of view 3 by sub-chain id

  const BlockGraph& graph() const { return builder.graph(); }
};
Fig1Fixture make_fig1();

/// One view of n sub-chains opened from g0 (registered by hand, no votes
/// behind it) where every sub-chain has four candidate tips for epoch 1:
/// rate r0 (no change), 2 r0 (high), 0 (low) when r0 = 1 and
/// epoch_length = 2, and the bare genesis, which leaves the epoch unfinished.
struct VoteBench {
  enum Tip { kNoChange = 0, kHigh = 1, kLow = 2, kIncomplete = 3 };

  VoteBench(std::uint32_t n, const ProtocolParams& p);

  BlockGraph g;
  ViewDescriptor view;
  std::vector<std::array<Digest, 4>> choice;  ///< by sub-chain, indexed by Tip
};

/// Random tree on one sub-chain with no view change. Parents are drawn from
/// the last `window` blocks so the tree has both forks and long branches.
BlockGraph random_single_chain(std::uint64_t seed, std::size_t blocks, std::size_t window = 6);

/// Scenario for short, view-changing runs used as a random graph source.
sim::ScenarioConfig small_view_change_scenario(std::uint64_t seed);

/// Local graph of the first node after a small_view_change_scenario run.
BlockGraph simulated_graph(const sim::ScenarioConfig& config, std::uint64_t seed);

/// Random multi-view graph with at most `max_blocks` blocks and between
/// `min_changes` and `max_changes` view changes on the main line. nullopt
/// when no such graph turned up in `attempts` simulator runs.
std::optional<BlockGraph> random_multiview(std::uint64_t seed, std::size_t max_blocks = 80,
                                           std::size_t min_changes = 1, std::size_t max_changes = 2,
                                           int attempts = 50);

/// Number of view changes on the main line of g.
std::size_t main_view_changes(const BlockGraph& g);

/// A random topological order of g's blocks (initial genesis first).
std::vector<Digest> random_topological_order(const BlockGraph& g, std::mt19937_64& rng);

/// Rebuilds g by accepting its blocks in `order`. Throws if any block is
/// rejected.
BlockGraph replay(const BlockGraph& g, const std::vector<Digest>& order);

}  // namespace balloon::testing
