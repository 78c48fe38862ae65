#include "balloon/graph.hpp"

#include <algorithm>

#include "balloon/errors.hpp"

namespace balloon {
namespace {

Error unresolved(const Digest& id) { return Error(ErrorCode::UnresolvedReference, "unknown block " + id.hex()); }

void push_unique(std::vector<std::size_t>& v, std::size_t x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

BlockGraph::BlockGraph(Block initial_genesis, std::shared_ptr<const Hasher> hasher) : hasher_(std::move(hasher)) {
  if (!hasher_) throw Error(ErrorCode::InvalidGraph, "no hasher");
  canonicalize(initial_genesis);
  const Block& g0 = initial_genesis;
  if (g0.guider || g0.parent || g0.root || g0.proof || !g0.anchors.empty() || g0.clock != 0 || g0.number != 0) {
    throw Error(ErrorCode::InvalidGraph, "initial genesis must have clock 0 and no references");
  }
  ViewInfo first;
  views_.push_back(first);
  view_by_key_.emplace(std::vector<Digest>{}, 0);
  view_geneses_.emplace_back();

  BlockRecord rec;
  rec.id = block_id(g0, *hasher_);
  rec.chain_hash = chain_hash(g0, *hasher_);
  rec.genesis = rec.id;
  rec.block = std::move(initial_genesis);
  index_.emplace(rec.id, 0);
  order_.push_back(rec.id);
  by_clock_[0].push_back(rec.id);
  view_geneses_[0].push_back(rec.id);
  children_.emplace_back();
  records_.push_back(std::move(rec));
}

const BlockRecord& BlockGraph::record(const Digest& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw unresolved(id);
  return records_[it->second];
}

std::optional<std::size_t> BlockGraph::index_of(const Digest& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Digest> BlockGraph::children(const Digest& id) const { return children_[record(id).index]; }

std::span<const Digest> BlockGraph::at_clock(std::uint64_t clock) const {
  auto it = by_clock_.find(clock);
  if (it == by_clock_.end()) return {};
  return it->second;
}

std::optional<std::size_t> BlockGraph::find_view(const std::vector<Digest>& sorted_anchors) const {
  auto it = view_by_key_.find(sorted_anchors);
  if (it == view_by_key_.end()) return std::nullopt;
  return it->second;
}

std::size_t BlockGraph::register_view(ViewInfo info) {
  std::sort(info.anchors.begin(), info.anchors.end());
  if (auto existing = find_view(info.anchors)) return *existing;
  if (info.anchors.empty()) throw Error(ErrorCode::InvalidGraph, "only the first view has no anchors");
  if (info.chain_count == 0) throw Error(ErrorCode::InvalidGraph, "view with zero sub-chains");
  for (const auto& a : info.anchors) {
    if (!contains(a)) throw unresolved(a);
  }
  const std::size_t index = views_.size();
  view_by_key_.emplace(info.anchors, index);
  views_.push_back(std::move(info));
  view_geneses_.emplace_back();
  return index;
}

std::span<const Digest> BlockGraph::view_geneses(std::size_t view) const { return view_geneses_.at(view); }

std::span<const std::size_t> BlockGraph::views_anchored_at(const Digest& id) const {
  auto it = anchor_views_.find(id);
  if (it == anchor_views_.end()) return {};
  return it->second;
}

std::vector<Digest> BlockGraph::missing_references(const Block& b) const {
  std::vector<Digest> missing;
  auto check = [&](const Digest& d) {
    if (!contains(d) && std::find(missing.begin(), missing.end(), d) == missing.end()) missing.push_back(d);
  };
  if (b.guider) check(*b.guider);
  if (b.parent) check(*b.parent);
  for (const auto& d : b.samples) check(d);
  for (const auto& d : b.anchors) check(d);
  return missing;
}

Digest BlockGraph::insert(Block b) {
  canonicalize(b);
  const Digest id = block_id(b, *hasher_);
  if (contains(id)) return id;
  if (auto missing = missing_references(b); !missing.empty()) throw unresolved(missing.front());
  if (b.is_initial_genesis()) throw Error(ErrorCode::InvalidGraph, "a graph has exactly one initial genesis");

  BlockRecord rec;
  rec.id = id;
  rec.chain_hash = chain_hash(b, *hasher_);
  rec.index = records_.size();
  rec.guider_index = index_.at(*b.guider);

  const bool first_of_view = b.is_genesis() && !b.anchors.empty();
  if (b.parent) {
    const BlockRecord& parent = records_[index_.at(*b.parent)];
    rec.parent_index = parent.index;
    rec.view = parent.view;
    rec.genesis = parent.genesis;
  } else if (first_of_view) {
    auto view = find_view(b.anchors);
    if (!view) throw Error(ErrorCode::InvalidGraph, "genesis " + id.short_hex() + " opens an unregistered view");
    rec.view = *view;
    rec.genesis = id;
  } else {
    const BlockRecord& guider = records_[rec.guider_index];
    if (!guider.block.is_genesis()) {
      throw Error(ErrorCode::InvalidGraph, "genesis " + id.short_hex() + " has neither anchors nor a genesis guider");
    }
    rec.view = guider.view;
    rec.genesis = id;
  }
  rec.chain = static_cast<std::uint32_t>(rec.chain_hash.mod(views_[rec.view].chain_count));

  if (rec.parent_index != BlockRecord::npos) children_[rec.parent_index].push_back(id);
  children_.emplace_back();
  by_clock_[b.clock].push_back(id);
  max_clock_ = std::max(max_clock_, b.clock);
  order_.push_back(id);
  if (b.is_genesis()) view_geneses_[rec.view].push_back(id);
  if (first_of_view) {
    for (const auto& a : b.anchors) {
      auto& views = anchor_views_[a];
      if (views.empty()) referenced_anchors_.push_back(a);
      push_unique(views, rec.view);
    }
  }
  index_.emplace(id, rec.index);
  rec.block = std::move(b);
  records_.push_back(std::move(rec));
  return id;
}

std::vector<Digest> guider_chain(const BlockGraph& g, const Digest& b) {
  std::vector<Digest> chain;
  const BlockRecord* rec = &g.record(b);
  while (rec->guider_index != BlockRecord::npos) {
    rec = &g.record_at(rec->guider_index);
    chain.push_back(rec->id);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

Digest genesis_of(const BlockGraph& g, const Digest& b) { return g.record(b).genesis; }

std::vector<Digest> anchors_of(const BlockGraph& g, const Digest& b) {
  const BlockRecord* gen = &g.record(g.record(b).genesis);
  while (gen->block.anchors.empty() && gen->guider_index != BlockRecord::npos) {
    const BlockRecord& guider = g.record_at(gen->guider_index);
    if (!guider.block.is_genesis()) break;
    gen = &guider;
  }
  return gen->block.anchors;
}

bool same_view(const BlockGraph& g, const Digest& b1, const Digest& b2) {
  return g.record(b1).view == g.record(b2).view;
}

bool same_chain(const BlockGraph& g, const Digest& b_cand, const Digest& b_ref) {
  const BlockRecord& ref = g.record(b_ref);
  const std::uint32_t n = g.view(ref.view).chain_count;
  return g.record(b_cand).chain_hash.mod(n) == ref.chain_hash.mod(n);
}

std::uint32_t chain_count_of(const BlockGraph& g, const Digest& b) { return g.view(g.record(b).view).chain_count; }

}  // namespace balloon
