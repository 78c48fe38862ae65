#include "balloon/sampling.hpp"

#include <algorithm>

#include "balloon/errors.hpp"

namespace balloon {

std::int64_t diff_clock(const BlockGraph& g, const Digest& b1, const Digest& b2) {
  return static_cast<std::int64_t>(g.block(b1).clock) - static_cast<std::int64_t>(g.block(b2).clock);
}

Rational diff_time(const BlockGraph& g, const Digest& b1, const Digest& b2) {
  const auto delta = g.block(b1).timestamp - g.block(b2).timestamp;
  return Rational(delta.count(), 1'000'000);
}

bool old_enough(Timestamp elapsed, const ProtocolParams& params) {
  // elapsed_us / 1e6 >= k * num / den
  const int128 lhs = static_cast<int128>(elapsed.count()) * params.delay_bound.den();
  const int128 rhs = static_cast<int128>(params.delay_multiplier) * params.delay_bound.num() * 1'000'000;
  return lhs >= rhs;
}

std::optional<Digest> find_reference(const BlockGraph& g, const Block& b, const ProtocolParams& params) {
  if (!b.guider) return std::nullopt;
  const BlockRecord* guider = &g.record(*b.guider);
  const BlockRecord* cur = guider;
  while (true) {
    const auto& blk = cur->block;
    if (guider->block.clock - blk.clock >= params.min_clock_gap &&
        old_enough(guider->block.timestamp - blk.timestamp, params)) {
      return cur->id;
    }
    if (cur->guider_index == BlockRecord::npos) return std::nullopt;
    cur = &g.record_at(cur->guider_index);
  }
}

bool views_related(const BlockGraph& g, std::size_t a, std::size_t b) {
  auto descends = [&](std::size_t from, std::size_t to) {
    std::optional<std::size_t> v = from;
    while (v) {
      if (*v == to) return true;
      v = g.view(*v).parent;
    }
    return false;
  };
  return descends(a, b) || descends(b, a);
}

std::optional<SampleSet> sample_candidates(const BlockGraph& g, const Block& b, const ProtocolParams& params) {
  auto reference = find_reference(g, b, params);
  if (!reference) return std::nullopt;
  const BlockRecord& ref = g.record(*reference);
  const std::uint32_t n = g.view(ref.view).chain_count;
  const std::uint64_t sid = ref.chain_hash.mod(n);

  SampleSet out{*reference, {}};
  for (const auto& id : g.at_clock(ref.block.clock)) {
    const BlockRecord& cand = g.record(id);
    if (cand.chain_hash.mod(n) != sid) continue;
    if (cand.view != ref.view && !views_related(g, cand.view, ref.view)) continue;
    out.members.push_back(id);
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

std::optional<SampleSet> sample(const BlockGraph& g, const Block& b, const ProtocolParams& params) {
  auto out = sample_candidates(g, b, params);
  if (out && out->members.size() > params.sample_cap) out->members.resize(params.sample_cap);
  return out;
}

std::vector<Digest> sample_digests(const BlockGraph& g, const Block& b, const ProtocolParams& params) {
  auto s = sample(g, b, params);
  return s ? std::move(s->members) : std::vector<Digest>{};
}

Rational epoch_rate(std::span<const Block> blocks) {
  if (blocks.empty()) throw Error(ErrorCode::EmptyEpoch, "no blocks in epoch");
  std::int64_t total = 0;
  for (const auto& b : blocks) total += static_cast<std::int64_t>(b.samples.size());
  return Rational(total, static_cast<std::int64_t>(blocks.size()));
}

Rational epoch_rate(const BlockGraph& g, std::span<const Digest> blocks) {
  if (blocks.empty()) throw Error(ErrorCode::EmptyEpoch, "no blocks in epoch");
  std::int64_t total = 0;
  for (const auto& id : blocks) total += static_cast<std::int64_t>(g.block(id).samples.size());
  return Rational(total, static_cast<std::int64_t>(blocks.size()));
}

}  // namespace balloon
