#include "balloon/adjustment.hpp"

#include <algorithm>
#include <set>

#include "balloon/errors.hpp"
#include "balloon/sampling.hpp"

namespace balloon {
namespace {

// Parent-ancestors of `tip` (inclusive) whose clock lies in [c_s, c_t],
// newest first.
std::vector<Digest> ancestors_in_window(const BlockGraph& g, const Digest& tip, std::uint64_t c_s,
                                        std::uint64_t c_t) {
  std::vector<Digest> out;
  const BlockRecord* cur = &g.record(tip);
  while (true) {
    const std::uint64_t clock = cur->block.clock;
    if (clock < c_s) break;
    if (clock <= c_t) out.push_back(cur->id);
    if (cur->parent_index == BlockRecord::npos) break;
    cur = &g.record_at(cur->parent_index);
  }
  return out;
}

}  // namespace

std::string_view to_string(Ballot b) {
  switch (b) {
    case Ballot::Abstain: return "abstain";
    case Ballot::NoChange: return "no_change";
    case Ballot::RateHigh: return "rate_high";
    case Ballot::RateLow: return "rate_low";
  }
  return "?";
}

EpochWindow epoch_window(std::uint64_t epoch, std::span<const std::uint64_t> genesis_clocks, std::uint32_t chain,
                         std::uint64_t epoch_length) {
  if (epoch == 0) throw Error(ErrorCode::InvalidParams, "epochs are numbered from 1");
  const std::uint64_t c_g = *std::max_element(genesis_clocks.begin(), genesis_clocks.end());
  EpochWindow w;
  w.epoch = epoch;
  w.c_s = epoch == 1 ? genesis_clocks[chain] : c_g + (epoch - 1) * epoch_length;
  w.c_t = c_g + epoch * epoch_length - 1;
  return w;
}

EpochWindow epoch_window(const BlockGraph& g, std::uint64_t epoch, const ViewDescriptor& view, std::uint32_t chain,
                         const ProtocolParams& params) {
  std::vector<std::uint64_t> clocks;
  clocks.reserve(view.geneses.size());
  for (const auto& gen : view.geneses) clocks.push_back(g.block(gen).clock);
  return epoch_window(epoch, clocks, chain, params.epoch_length);
}

EpochVote::EpochVote(const BlockGraph& g, std::uint64_t epoch, std::uint32_t n_v, const ProtocolParams& params)
    : g_(&g), params_(&params), epoch_(epoch), n_v_(n_v) {}

bool EpochVote::cast(std::span<const Digest> block_set) {
  if (block_set.empty()) {
    ballots_.push_back(Ballot::Abstain);
    rates_.emplace_back();
    potential_anchors_.emplace_back();
    return true;
  }
  Digest anchor = block_set.front();
  std::uint64_t anchor_clock = g_->block(anchor).clock;
  for (const auto& id : block_set.subspan(1)) {
    const std::uint64_t c = g_->block(id).clock;
    if (c > anchor_clock || (c == anchor_clock && id < anchor)) {
      anchor = id;
      anchor_clock = c;
    }
  }
  potential_anchors_.emplace_back(anchor);
  anchors_.push_back(anchor);

  const Rational rate = epoch_rate(*g_, block_set);
  rates_.emplace_back(rate);
  const Rational& r0 = params_->reference_rate;
  const Rational alpha = (rate - r0).abs() / r0;
  if (alpha <= params_->vote_threshold) {
    ballots_.push_back(Ballot::NoChange);
    ++tally_.no_change;
    return !strict_majority(tally_.no_change, n_v_);
  }
  deviant_.push_back(rate);
  if (rate > r0) {
    ballots_.push_back(Ballot::RateHigh);
    ++tally_.rate_high;
  } else {
    ballots_.push_back(Ballot::RateLow);
    ++tally_.rate_low;
  }
  return true;
}

ChangeDecision EpochVote::finish() const {
  ChangeDecision d;
  d.epoch = epoch_;
  const bool high = strict_majority(tally_.rate_high, n_v_);
  const bool low = strict_majority(tally_.rate_low, n_v_);
  if (anchors_.size() == n_v_ && (high || low)) {
    d.kind = ChangeDecision::Kind::Change;
    d.anchors = anchors_;
    d.deviant_rates = deviant_;
    d.vote_up = high;
  }
  return d;
}

EpochOutcome tally_epoch(const BlockGraph& g, std::uint64_t epoch, const std::vector<std::vector<Digest>>& block_sets,
                         const ProtocolParams& params) {
  EpochVote vote(g, epoch, static_cast<std::uint32_t>(block_sets.size()), params);
  for (const auto& set : block_sets) {
    if (!vote.cast(set)) break;
  }
  EpochOutcome out;
  out.epoch = epoch;
  out.ballots = vote.ballots();
  out.rates = vote.rates();
  out.potential_anchors = vote.potential_anchors();
  out.tally = vote.tally();
  out.decision = vote.finish();
  return out;
}

ChangeDecision detect_view_change(const BlockGraph& g, const ViewDescriptor& view, const Snapshot& tips,
                                  const ProtocolParams& params) {
  const auto n_v = static_cast<std::uint32_t>(view.geneses.size());
  if (n_v == 0 || tips.blocks.size() != n_v) {
    throw Error(ErrorCode::InconsistentTips, "expected one tip per sub-chain");
  }
  std::vector<std::uint64_t> genesis_clocks;
  std::uint64_t top = 0;
  for (std::uint32_t n = 0; n < n_v; ++n) {
    if (genesis_of(g, tips.blocks[n]) != view.geneses[n]) {
      throw Error(ErrorCode::InconsistentTips, "tip " + tips.blocks[n].short_hex() + " is not on sub-chain " +
                                                   std::to_string(n) + " of the view");
    }
    genesis_clocks.push_back(g.block(view.geneses[n]).clock);
    top = std::max(top, g.block(tips.blocks[n]).clock);
  }

  for (std::uint64_t epoch = 1;; ++epoch) {
    EpochVote vote(g, epoch, n_v, params);
    for (std::uint32_t n = 0; n < n_v; ++n) {
      const EpochWindow w = epoch_window(epoch, genesis_clocks, n, params.epoch_length);
      if (g.block(tips.blocks[n]).clock < w.c_t) {
        ChangeDecision pending;
        pending.epoch = epoch;
        pending.pending = true;
        return pending;
      }
      const auto set = ancestors_in_window(g, tips.blocks[n], w.c_s, w.c_t);
      if (!vote.cast(set)) break;
    }
    ChangeDecision d = vote.finish();
    if (d.is_change()) return d;
    // Tips are finite, so some later epoch is incomplete.
    if (epoch_window(epoch, genesis_clocks, 0, params.epoch_length).c_t > top) {
      ChangeDecision pending;
      pending.epoch = epoch + 1;
      pending.pending = true;
      return pending;
    }
  }
}

std::uint32_t next_chain_count(std::uint32_t n_v, std::span<const Rational> rates, bool vote_up,
                               const ProtocolParams& params) {
  if (rates.empty()) throw Error(ErrorCode::EmptyRates, "no deviant rates");
  const Rational& r0 = params.reference_rate;
  Rational factor;
  if (vote_up) {
    factor = *std::max_element(rates.begin(), rates.end()) / r0;
  } else {
    std::optional<Rational> r_m;
    for (const auto& r : rates) {
      if (r < r0 && (!r_m || r > *r_m)) r_m = r;
    }
    if (!r_m) throw Error(ErrorCode::EmptyRates, "no rate below the reference on a downward vote");
    factor = std::max(*r_m / r0, Rational(1) - params.max_downscale);
  }
  const std::int64_t next = (Rational(static_cast<std::int64_t>(n_v)) * factor).ceil();
  return static_cast<std::uint32_t>(std::max<std::int64_t>(1, next));
}

Block mine_genesis(const BlockGraph& g, std::span<const Digest> anchors, std::span<const Digest> known_geneses,
                   const ProtocolParams& params, PowOracle& oracle, Timestamp now, std::vector<std::string> payload) {
  Block b;
  if (known_geneses.empty()) {
    b.anchors.assign(anchors.begin(), anchors.end());
    b.guider = pick_guider(g, anchors);
  } else {
    b.guider = pick_guider(g, known_geneses);
  }
  canonicalize(b);
  b.clock = g.block(*b.guider).clock + 1;
  b.weight = params.diff_required;
  b.timestamp = now;
  b.payload = std::move(payload);
  b.samples = sample_digests(g, b, params);
  oracle.solve(b, params, g.hasher());
  return b;
}

ViewResolution resolve_view_change(const BlockGraph& g, std::span<const Digest> anchors,
                                   const ProtocolParams& params) {
  auto fail = [](std::string why) { return ViewResolution{std::nullopt, std::move(why)}; };
  if (anchors.empty()) return fail("no anchors");
  for (const auto& a : anchors) {
    if (!g.contains(a)) throw Error(ErrorCode::UnresolvedReference, "unknown anchor " + a.hex());
  }
  const std::size_t view = g.record(anchors.front()).view;
  const std::uint32_t n_v = g.view(view).chain_count;
  if (anchors.size() != n_v) return fail("anchor count differs from the sub-chain count of the anchored view");

  std::vector<const BlockRecord*> by_chain(n_v, nullptr);
  for (const auto& a : anchors) {
    const BlockRecord& rec = g.record(a);
    if (rec.view != view) return fail("anchors span more than one view");
    if (by_chain[rec.chain] != nullptr) return fail("two anchors on one sub-chain");
    by_chain[rec.chain] = &rec;
  }

  std::vector<std::uint64_t> genesis_clocks;
  std::uint64_t top = 0;
  for (const auto* rec : by_chain) {
    genesis_clocks.push_back(g.block(rec->genesis).clock);
    top = std::max(top, rec->block.clock);
  }
  const std::uint64_t c_g = *std::max_element(genesis_clocks.begin(), genesis_clocks.end());
  const std::uint64_t epoch = top < c_g ? 1 : (top - c_g) / params.epoch_length + 1;

  std::vector<std::vector<Digest>> sets;
  for (std::uint32_t n = 0; n < n_v; ++n) {
    const EpochWindow w = epoch_window(epoch, genesis_clocks, n, params.epoch_length);
    const std::uint64_t clock = by_chain[n]->block.clock;
    if (clock < w.c_s || clock > w.c_t) return fail("anchors do not share one epoch");
    sets.push_back(ancestors_in_window(g, by_chain[n]->id, w.c_s, w.c_t));
  }
  const EpochOutcome outcome = tally_epoch(g, epoch, sets, params);
  if (!outcome.decision.is_change()) return fail("the anchored epoch does not vote for a change");

  ViewInfo info;
  info.anchors.assign(anchors.begin(), anchors.end());
  std::sort(info.anchors.begin(), info.anchors.end());
  info.number = g.view(view).number + 1;
  info.parent = view;
  info.epoch = epoch;
  info.vote_up = outcome.decision.vote_up;
  info.deviant_rates = outcome.decision.deviant_rates;
  info.chain_count = next_chain_count(n_v, info.deviant_rates, info.vote_up, params);
  return ViewResolution{std::move(info), {}};
}

}  // namespace balloon
