#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "balloon/block.hpp"
#include "balloon/digest.hpp"

namespace balloon {

/// A view is identified by its anchor set. The registry entry also records the
/// decision that created it so the sub-chain count can be read back without
/// re-running the vote.
struct ViewInfo {
  std::vector<Digest> anchors;   ///< sorted; empty for the first view
  std::uint64_t number = 1;
  std::uint32_t chain_count = 1;
  std::optional<std::size_t> parent;  ///< index of the view the anchors live in
  std::uint64_t epoch = 0;            ///< epoch of the old view that triggered the change
  bool vote_up = false;
  std::vector<Rational> deviant_rates;
};

/// Resolved identity of a view as seen by ordering: which geneses won each
/// sub-chain slot.
struct ViewDescriptor {
  std::size_t view_index = 0;
  std::uint64_t view_number = 1;
  std::vector<Digest> anchors;
  std::vector<Digest> geneses;   ///< indexed by sub-chain id
  std::uint32_t chain_count = 1;
};

/// Everything the graph knows about an accepted block. Derived fields are
/// fixed at insertion and depend only on the block and its references.
struct BlockRecord {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Block block;
  Digest id;
  std::size_t index = 0;          ///< insertion position
  std::size_t parent_index = npos;
  std::size_t guider_index = npos;
  Digest chain_hash;
  std::size_t view = 0;
  std::uint32_t chain = 0;   ///< sub-chain id under the block's own view
  Digest genesis;            ///< first block reached along parent edges (self for geneses)
};

/// Append-only store of accepted blocks.
///
/// Invariants: every reference of a stored block resolves to a stored block,
/// so insertion order is a topological order; the initial genesis has clock 0
/// and no references. One writer at a time; concurrent readers are safe while
/// no insertion is in progress.
class BlockGraph {
 public:
  explicit BlockGraph(Block initial_genesis, std::shared_ptr<const Hasher> hasher = sha256_hasher());

  const Hasher& hasher() const { return *hasher_; }
  std::shared_ptr<const Hasher> hasher_ptr() const { return hasher_; }

  const Digest& genesis_root() const { return order_.front(); }
  std::size_t size() const { return records_.size(); }
  bool contains(const Digest& id) const { return index_.contains(id); }

  /// Throws Error(UnresolvedReference) for unknown ids.
  const BlockRecord& record(const Digest& id) const;
  const BlockRecord& record_at(std::size_t index) const { return records_[index]; }
  std::optional<std::size_t> index_of(const Digest& id) const;
  const Block& block(const Digest& id) const { return record(id).block; }

  /// Children along parent edges, in insertion order.
  std::span<const Digest> children(const Digest& id) const;
  std::span<const Digest> children_at(std::size_t index) const { return children_[index]; }
  /// All blocks with the given clock, in insertion order.
  std::span<const Digest> at_clock(std::uint64_t clock) const;
  std::span<const Digest> insertion_order() const { return order_; }
  std::uint64_t max_clock() const { return max_clock_; }

  const std::vector<ViewInfo>& views() const { return views_; }
  const ViewInfo& view(std::size_t index) const { return views_.at(index); }
  std::optional<std::size_t> find_view(const std::vector<Digest>& sorted_anchors) const;
  /// Adds a view or returns the index of the identical one already present.
  std::size_t register_view(ViewInfo info);
  /// Geneses of a view in insertion order (the initial genesis for view 0).
  std::span<const Digest> view_geneses(std::size_t view) const;
  /// True iff some genesis lists this block in its anchors field.
  bool is_referenced_anchor(const Digest& id) const { return anchor_views_.contains(id); }
  /// Views whose anchor sets contain this block.
  std::span<const std::size_t> views_anchored_at(const Digest& id) const;
  std::span<const Digest> referenced_anchors() const { return referenced_anchors_; }

  /// References of b (guider, parent, samples, anchors) not in the graph.
  std::vector<Digest> missing_references(const Block& b) const;

  /// Stores b and returns its id. Structural preconditions only: references
  /// resolve, and a first-of-view genesis has a registered view. Consensus
  /// validity is the caller's job (see validate_block). Re-inserting an
  /// existing block is a no-op.
  Digest insert(Block b);

 private:
  std::shared_ptr<const Hasher> hasher_;
  std::deque<BlockRecord> records_;
  std::unordered_map<Digest, std::size_t> index_;
  std::deque<std::vector<Digest>> children_;
  std::unordered_map<std::uint64_t, std::vector<Digest>> by_clock_;
  std::vector<Digest> order_;
  std::vector<ViewInfo> views_;
  std::map<std::vector<Digest>, std::size_t> view_by_key_;
  std::vector<std::vector<Digest>> view_geneses_;
  std::unordered_map<Digest, std::vector<std::size_t>> anchor_views_;
  std::vector<Digest> referenced_anchors_;
  std::uint64_t max_clock_ = 0;
};

/// Blocks from the initial genesis up to b's guider, following guider edges.
/// Its length equals b's clock.
std::vector<Digest> guider_chain(const BlockGraph& g, const Digest& b);

/// Sub-chain genesis of b, reached through parent edges.
Digest genesis_of(const BlockGraph& g, const Digest& b);

/// Anchor set of b's view: the anchors field of b's genesis, or inherited
/// through genesis guiders. Empty in the first view.
std::vector<Digest> anchors_of(const BlockGraph& g, const Digest& b);

bool same_view(const BlockGraph& g, const Digest& b1, const Digest& b2);

/// Whether the chain hashes of both blocks agree modulo the sub-chain count of
/// b_ref's view.
bool same_chain(const BlockGraph& g, const Digest& b_cand, const Digest& b_ref);

std::uint32_t chain_count_of(const BlockGraph& g, const Digest& b);

}  // namespace balloon
