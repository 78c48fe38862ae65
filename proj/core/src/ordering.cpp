#include "balloon/ordering.hpp"

#include <algorithm>
#include <unordered_set>

#include "balloon/errors.hpp"

namespace balloon {
namespace {

constexpr std::size_t npos = BlockRecord::npos;

void sort_by_clock(const BlockGraph& g, std::vector<std::size_t>& blocks) {
  std::sort(blocks.begin(), blocks.end(), [&](std::size_t a, std::size_t b) {
    const BlockRecord& ra = g.record_at(a);
    const BlockRecord& rb = g.record_at(b);
    if (ra.block.clock != rb.block.clock) return ra.block.clock < rb.block.clock;
    return ra.id < rb.id;
  });
}

}  // namespace

SubtreeIndex::SubtreeIndex(const BlockGraph& g) : g_(&g) {
  const std::size_t n = g.size();
  offspring_weight_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) offspring_weight_.push_back(g.record_at(i).block.weight);
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t p = g.record_at(i).parent_index;
    if (p != npos) offspring_weight_[p] += offspring_weight_[i];
  }

  reformers_.resize(n);
  const auto anchors = g.referenced_anchors();
  for (std::uint32_t slot = 0; slot < anchors.size(); ++slot) {
    for (std::size_t j = g.record(anchors[slot]).index; j != npos; j = g.record_at(j).parent_index) {
      reformers_[j].push_back(slot);
    }
  }

  view_children_.resize(g.views().size());
  for (std::size_t v = 0; v < g.views().size(); ++v) {
    if (auto parent = g.view(v).parent) view_children_[*parent].push_back(v);
  }
  view_blocks_.resize(g.views().size());
  for (std::size_t i = 0; i < n; ++i) view_blocks_[g.record_at(i).view].push_back(i);
  weight_memo_.resize(n);
}

const std::vector<std::size_t>& SubtreeIndex::successor_views(std::size_t index) {
  const auto& key = reformers_[index];
  auto it = closure_memo_.find(key);
  if (it != closure_memo_.end()) return it->second;

  const auto anchors = g_->referenced_anchors();
  std::vector<std::size_t> views;
  std::vector<std::size_t> frontier;
  std::vector<bool> seen(g_->views().size(), false);
  for (std::uint32_t slot : key) {
    for (std::size_t v : g_->views_anchored_at(anchors[slot])) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push_back(v);
      }
    }
  }
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    views.push_back(v);
    for (std::size_t child : view_children_[v]) {
      if (!seen[child]) {
        seen[child] = true;
        frontier.push_back(child);
      }
    }
  }
  std::sort(views.begin(), views.end());
  return closure_memo_.emplace(key, std::move(views)).first->second;
}

const std::vector<Rational>& SubtreeIndex::view_sums(std::size_t view, std::uint32_t n) {
  auto key = std::make_pair(view, n);
  auto it = sums_memo_.find(key);
  if (it != sums_memo_.end()) return it->second;
  std::vector<Rational> sums(n);
  for (std::size_t i : view_blocks_[view]) {
    const BlockRecord& rec = g_->record_at(i);
    sums[rec.chain_hash.mod(n)] += rec.block.weight;
  }
  return sums_memo_.emplace(key, std::move(sums)).first->second;
}

Rational SubtreeIndex::supporter_weight(std::size_t index) {
  if (reformers_[index].empty()) return Rational(0);
  const BlockRecord& rec = g_->record_at(index);
  const std::uint32_t n = g_->view(rec.view).chain_count;
  Rational total;
  for (std::size_t v : successor_views(index)) total += view_sums(v, n)[rec.chain];
  return total;
}

std::vector<Digest> SubtreeIndex::supporters(std::size_t index) {
  std::vector<Digest> out;
  if (reformers_[index].empty()) return out;
  const BlockRecord& rec = g_->record_at(index);
  const std::uint32_t n = g_->view(rec.view).chain_count;
  for (std::size_t v : successor_views(index)) {
    for (std::size_t i : view_blocks_[v]) {
      const BlockRecord& s = g_->record_at(i);
      if (s.chain_hash.mod(n) == rec.chain) out.push_back(s.id);
    }
  }
  return out;
}

Rational SubtreeIndex::weight(std::size_t index) {
  auto& memo = weight_memo_[index];
  if (!memo) memo = offspring_weight_[index] + supporter_weight(index);
  return *memo;
}

std::optional<std::size_t> SubtreeIndex::heaviest_child(std::size_t index) {
  std::optional<std::size_t> best;
  Rational best_weight;
  for (const auto& child : g_->children_at(index)) {
    const std::size_t c = g_->record(child).index;
    const Rational w = weight(c);
    if (!best || w > best_weight || (w == best_weight && child < g_->record_at(*best).id)) {
      best = c;
      best_weight = w;
    }
  }
  return best;
}

std::vector<Digest> offspring(const BlockGraph& g, const Digest& b) {
  std::vector<Digest> out;
  std::vector<Digest> stack{g.record(b).id};
  while (!stack.empty()) {
    Digest cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (const auto& c : g.children(cur)) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Digest> subtree_blocks(const BlockGraph& g, const Digest& b) {
  SubtreeIndex index(g);
  auto out = offspring(g, b);
  auto extra = index.supporters(g.record(b).index);
  out.insert(out.end(), extra.begin(), extra.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational subtree_weight(const BlockGraph& g, const Digest& b) {
  SubtreeIndex index(g);
  return index.weight(b);
}

OrderingResult order_graph(const BlockGraph& g, const ProtocolParams& params) {
  SubtreeIndex index(g);
  return order_graph(g, params, index);
}

OrderingResult order_graph(const BlockGraph& g, const ProtocolParams& params, SubtreeIndex& index) {
  OrderingResult out;
  ViewDescriptor desc;
  desc.geneses = {g.genesis_root()};

  auto walk_to_tip = [&](std::size_t cursor, std::vector<std::size_t>* walked) {
    while (auto next = index.heaviest_child(cursor)) {
      cursor = *next;
      if (walked) walked->push_back(cursor);
    }
    return cursor;
  };
  auto close_segment = [&](ViewSegment& seg, std::vector<std::size_t>& walked) {
    sort_by_clock(g, walked);
    seg.begin = out.chain.blocks.size();
    out.chain.view_boundaries.push_back({seg.view.view_number, seg.begin});
    for (std::size_t i : walked) out.chain.blocks.push_back(g.record_at(i).id);
    seg.end = out.chain.blocks.size();
  };

  while (true) {
    ViewSegment seg;
    seg.view = desc;
    const std::uint32_t n_v = desc.chain_count;
    std::vector<std::size_t> cursor(n_v);
    std::vector<std::size_t> walked;
    std::vector<std::uint64_t> genesis_clocks(n_v);
    for (std::uint32_t n = 0; n < n_v; ++n) {
      cursor[n] = g.record(desc.geneses[n]).index;
      walked.push_back(cursor[n]);
      genesis_clocks[n] = g.record_at(cursor[n]).block.clock;
    }

    std::optional<ChangeDecision> change;
    for (std::uint64_t epoch = 1;; ++epoch) {
      EpochVote vote(g, epoch, n_v, params);
      bool incomplete = false;
      for (std::uint32_t n = 0; n < n_v; ++n) {
        const EpochWindow w = epoch_window(epoch, genesis_clocks, n, params.epoch_length);
        std::vector<Digest> set;
        auto in_window = [&](std::size_t i) {
          const std::uint64_t c = g.record_at(i).block.clock;
          return c >= w.c_s && c <= w.c_t;
        };
        if (in_window(cursor[n])) set.push_back(g.record_at(cursor[n]).id);
        std::optional<std::size_t> next;
        while ((next = index.heaviest_child(cursor[n])) && g.record_at(*next).block.clock <= w.c_t) {
          cursor[n] = *next;
          walked.push_back(*next);
          if (in_window(*next)) set.push_back(g.record_at(*next).id);
        }
        const bool complete = g.record_at(cursor[n]).block.clock >= w.c_t || next.has_value();
        if (!complete) {
          incomplete = true;
          break;
        }
        if (!vote.cast(set)) break;
      }
      EpochOutcome rec;
      rec.epoch = epoch;
      rec.ballots = vote.ballots();
      rec.rates = vote.rates();
      rec.potential_anchors = vote.potential_anchors();
      rec.tally = vote.tally();
      rec.decision = vote.finish();
      if (incomplete) {
        rec.decision = ChangeDecision{};
        rec.decision.epoch = epoch;
        rec.decision.pending = true;
        seg.epochs.push_back(std::move(rec));
        break;
      }
      seg.epochs.push_back(rec);
      if (rec.decision.is_change()) {
        change = rec.decision;
        break;
      }
    }

    if (!change) {
      for (auto& c : cursor) c = walk_to_tip(c, &walked);
      close_segment(seg, walked);
      out.tips.blocks.clear();
      for (auto c : cursor) out.tips.blocks.push_back(g.record_at(c).id);
      out.segments.push_back(std::move(seg));
      return out;
    }

    seg.change = change;
    close_segment(seg, walked);
    const std::size_t from_view = desc.view_index;
    out.segments.push_back(std::move(seg));

    std::vector<Digest> key = change->anchors;
    std::sort(key.begin(), key.end());
    const auto target = g.find_view(key);
    const std::uint32_t n_next = target ? g.view(*target).chain_count
                                        : next_chain_count(n_v, change->deviant_rates, change->vote_up, params);
    std::vector<std::optional<std::size_t>> chosen(n_next);
    std::vector<Digest> known;
    if (target) {
      for (const auto& gen : g.view_geneses(*target)) {
        known.push_back(gen);
        const BlockRecord& rec = g.record(gen);
        auto& slot = chosen[rec.chain];
        if (!slot) {
          slot = rec.index;
          continue;
        }
        const Rational w = index.weight(rec.index);
        const Rational best = index.weight(*slot);
        if (w > best || (w == best && rec.id < g.record_at(*slot).id)) slot = rec.index;
      }
    }
    const bool complete = std::all_of(chosen.begin(), chosen.end(), [](const auto& s) { return s.has_value(); });
    if (!complete) {
      PendingChange pending;
      pending.decision = *change;
      pending.from_view = from_view;
      pending.target_view = target;
      pending.next_chain_count = n_next;
      pending.known_geneses = std::move(known);
      for (const auto& s : chosen) pending.covered.push_back(s.has_value());
      out.pending = std::move(pending);
      out.tips.blocks.clear();
      for (auto c : cursor) out.tips.blocks.push_back(g.record_at(walk_to_tip(c, nullptr)).id);
      return out;
    }

    ViewDescriptor next;
    next.view_index = *target;
    next.view_number = g.view(*target).number;
    next.anchors = key;
    next.chain_count = n_next;
    for (const auto& s : chosen) next.geneses.push_back(g.record_at(*s).id);
    desc = std::move(next);
  }
}

OrderedChain total_order(const BlockGraph& g, const ProtocolParams& params) {
  return order_graph(g, params).chain;
}

Snapshot latest_main_blocks(const BlockGraph& g, const ProtocolParams& params) {
  return order_graph(g, params).tips;
}

bool sub_chain_confirmed(SubtreeIndex& index, std::size_t block, const ProtocolParams& params) {
  const BlockGraph& g = index.graph();
  const BlockRecord& rec = g.record_at(block);
  std::vector<std::size_t> peers;
  if (rec.parent_index != npos) {
    for (const auto& c : g.children_at(rec.parent_index)) {
      if (c != rec.id) peers.push_back(g.record(c).index);
    }
  } else if (!rec.block.is_initial_genesis()) {
    for (const auto& gen : g.view_geneses(rec.view)) {
      const BlockRecord& other = g.record(gen);
      if (other.id != rec.id && other.chain == rec.chain) peers.push_back(other.index);
    }
  }
  const Rational own = index.weight(block);
  if (peers.empty()) return own >= params.confirm_margin;
  return std::all_of(peers.begin(), peers.end(),
                     [&](std::size_t p) { return own >= index.weight(p) + params.confirm_margin; });
}

namespace {

// Smallest clock among blocks of [begin, end) that are not sub-chain confirmed.
std::optional<std::uint64_t> first_unconfirmed_clock(const OrderingResult& order, std::size_t begin, std::size_t end,
                                                     SubtreeIndex& index, const ProtocolParams& params) {
  const BlockGraph& g = index.graph();
  std::optional<std::uint64_t> low;
  for (std::size_t p = begin; p < end; ++p) {
    const BlockRecord& rec = g.record(order.chain.blocks[p]);
    if (low && rec.block.clock >= *low) continue;
    if (!sub_chain_confirmed(index, rec.index, params)) low = rec.block.clock;
  }
  return low;
}

}  // namespace

bool is_confirmed(const BlockGraph& g, const Digest& b, const ProtocolParams& params) {
  SubtreeIndex index(g);
  const OrderingResult order = order_graph(g, params, index);
  const auto it = std::find(order.chain.blocks.begin(), order.chain.blocks.end(), b);
  if (it == order.chain.blocks.end()) throw Error(ErrorCode::NotOnMainChain, b.hex());
  const auto pos = static_cast<std::size_t>(it - order.chain.blocks.begin());
  for (const auto& seg : order.segments) {
    if (pos < seg.begin || pos >= seg.end) continue;
    const auto low = first_unconfirmed_clock(order, seg.begin, seg.end, index, params);
    return !low || g.block(b).clock < *low;
  }
  return false;
}

std::size_t confirmed_prefix_length(const OrderingResult& order, SubtreeIndex& index, const ProtocolParams& params) {
  const BlockGraph& g = index.graph();
  std::size_t length = 0;
  for (const auto& seg : order.segments) {
    const auto low = first_unconfirmed_clock(order, seg.begin, seg.end, index, params);
    for (std::size_t p = seg.begin; p < seg.end; ++p) {
      if (low && g.block(order.chain.blocks[p]).clock >= *low) return length;
      ++length;
    }
  }
  return length;
}

std::vector<Digest> confirmed_prefix(const BlockGraph& g, const ProtocolParams& params) {
  SubtreeIndex index(g);
  const OrderingResult order = order_graph(g, params, index);
  const std::size_t n = confirmed_prefix_length(order, index, params);
  return {order.chain.blocks.begin(), order.chain.blocks.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<std::string> order_transactions(const OrderedChain& c, const BlockGraph& g) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& id : c.blocks) {
    const Block& b = g.block(id);
    if (b.is_initial_genesis()) continue;
    for (const auto& tx : b.payload) {
      if (seen.insert(tx).second) out.push_back(tx);
    }
  }
  return out;
}

}  // namespace balloon
