#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "balloon/adjustment.hpp"
#include "balloon/graph.hpp"
#include "balloon/mining.hpp"
#include "balloon/params.hpp"

namespace balloon {

/// Offspring of b: b and everything below it along parent edges. Sorted.
std::vector<Digest> offspring(const BlockGraph& g, const Digest& b);
/// Offspring plus supporters from later views. Sorted.
std::vector<Digest> subtree_blocks(const BlockGraph& g, const Digest& b);
Rational subtree_weight(const BlockGraph& g, const Digest& b);

/// Subtree weights over one frozen graph, computed once per query set.
///
/// Offspring weights come from a single reverse pass over insertion order.
/// The later-view part of a subtree depends only on which referenced anchors
/// lie in the offspring, so it is cached per anchor set and per sub-chain.
class SubtreeIndex {
 public:
  explicit SubtreeIndex(const BlockGraph& g);

  const BlockGraph& graph() const { return *g_; }

  Rational weight(std::size_t index);
  Rational weight(const Digest& id) { return weight(g_->record(id).index); }
  const Rational& offspring_weight(std::size_t index) const { return offspring_weight_[index]; }
  Rational supporter_weight(std::size_t index);
  /// Supporters of a block, unsorted.
  std::vector<Digest> supporters(std::size_t index);

  /// Child with the largest subtree weight; the smaller digest wins ties.
  std::optional<std::size_t> heaviest_child(std::size_t index);

 private:
  const std::vector<std::size_t>& successor_views(std::size_t index);
  const std::vector<Rational>& view_sums(std::size_t view, std::uint32_t n);

  const BlockGraph* g_;
  std::vector<Rational> offspring_weight_;
  std::vector<std::vector<std::uint32_t>> reformers_;  // per block: slots into referenced_anchors
  std::vector<std::vector<std::size_t>> view_children_;
  std::vector<std::vector<std::size_t>> view_blocks_;
  std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> closure_memo_;
  std::map<std::pair<std::size_t, std::uint32_t>, std::vector<Rational>> sums_memo_;
  std::vector<std::optional<Rational>> weight_memo_;
};

struct ViewBoundary {
  std::uint64_t view_number = 1;
  std::size_t index = 0;  ///< position in OrderedChain::blocks where the view starts
  friend bool operator==(const ViewBoundary&, const ViewBoundary&) = default;
};

struct OrderedChain {
  std::vector<Digest> blocks;
  std::vector<ViewBoundary> view_boundaries;
  friend bool operator==(const OrderedChain&, const OrderedChain&) = default;
};

/// One main view as walked by the ordering pass.
struct ViewSegment {
  ViewDescriptor view;
  std::size_t begin = 0;  ///< [begin, end) in the ordered chain
  std::size_t end = 0;
  std::vector<EpochOutcome> epochs;
  std::optional<ChangeDecision> change;  ///< the change that closed the view
};

/// A change has been decided but the next view does not yet have a genesis
/// for every sub-chain.
struct PendingChange {
  ChangeDecision decision;
  std::size_t from_view = 0;
  std::optional<std::size_t> target_view;  ///< registry index once some genesis exists
  std::uint32_t next_chain_count = 1;
  std::vector<Digest> known_geneses;
  std::vector<bool> covered;  ///< by sub-chain id of the next view
};

struct OrderingResult {
  OrderedChain chain;
  std::vector<ViewSegment> segments;
  /// Latest main blocks of the last view reached, walked to the tips.
  Snapshot tips;
  std::optional<PendingChange> pending;

  const ViewDescriptor& current_view() const { return segments.back().view; }
};

/// Full ordering pass: walks main views epoch by epoch, applies view changes
/// and collects each view's main blocks sorted by (clock, digest).
OrderingResult order_graph(const BlockGraph& g, const ProtocolParams& params);
OrderingResult order_graph(const BlockGraph& g, const ProtocolParams& params, SubtreeIndex& index);

OrderedChain total_order(const BlockGraph& g, const ProtocolParams& params);
Snapshot latest_main_blocks(const BlockGraph& g, const ProtocolParams& params);

/// b leads each of its peers (siblings, or same-view geneses of its sub-chain)
/// by confirm_margin in subtree weight; without peers its own subtree weight
/// must reach confirm_margin.
bool sub_chain_confirmed(SubtreeIndex& index, std::size_t block, const ProtocolParams& params);

/// Throws Error(NotOnMainChain) when b is not in the ordered chain.
bool is_confirmed(const BlockGraph& g, const Digest& b, const ProtocolParams& params);

/// Number of leading blocks of the ordered chain that are confirmed.
std::size_t confirmed_prefix_length(const OrderingResult& order, SubtreeIndex& index, const ProtocolParams& params);
std::vector<Digest> confirmed_prefix(const BlockGraph& g, const ProtocolParams& params);

/// Payload entries in block order, keeping the first occurrence of each id.
/// The initial genesis payload holds parameters, not transactions, and is skipped.
std::vector<std::string> order_transactions(const OrderedChain& c, const BlockGraph& g);

}  // namespace balloon
