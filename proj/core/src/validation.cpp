#include "balloon/validation.hpp"

#include <algorithm>

#include "balloon/adjustment.hpp"
#include "balloon/errors.hpp"
#include "balloon/merkle.hpp"
#include "balloon/mining.hpp"
#include "balloon/sampling.hpp"

namespace balloon {
namespace {

using V = ValidationVerdict;

V check_samples(const BlockGraph& g, const Block& b, const ProtocolParams& params, SampleCheck mode) {
  if (b.samples.size() > params.sample_cap) {
    return V::reject(RejectReason::SampleCapExceeded, std::to_string(b.samples.size()) + " samples");
  }
  if (std::adjacent_find(b.samples.begin(), b.samples.end()) != b.samples.end()) {
    return V::reject(RejectReason::BadSamples, "duplicate sample");
  }
  const auto expected =
      mode == SampleCheck::Exact ? sample(g, b, params) : sample_candidates(g, b, params);
  if (!expected) {
    if (!b.samples.empty()) return V::reject(RejectReason::BadSamples, "samples without a reference block");
    return V::accept();
  }
  if (mode == SampleCheck::Exact) {
    if (b.samples != expected->members) return V::reject(RejectReason::BadSamples, "samples differ from the rule");
    return V::accept();
  }
  if (!std::includes(expected->members.begin(), expected->members.end(), b.samples.begin(), b.samples.end())) {
    return V::reject(RejectReason::BadSamples, "sample outside the rule's set");
  }
  const bool has_reference = std::binary_search(b.samples.begin(), b.samples.end(), expected->reference);
  if (!has_reference && b.samples.size() < params.sample_cap) {
    return V::reject(RejectReason::BadSamples, "reference block missing from samples");
  }
  return V::accept();
}

V check_normal(const BlockGraph& g, const Block& b, const Digest& h_c) {
  if (!b.root || !b.proof) return V::reject(RejectReason::BadProof, "normal block without root or proof");
  if (!b.anchors.empty()) return V::reject(RejectReason::BadGenesisForm, "normal block with anchors");
  const BlockRecord& parent = g.record(*b.parent);
  if (b.number != parent.block.number + 1) return V::reject(RejectReason::BadNumber, "number is not parent + 1");

  const std::uint32_t n = g.view(parent.view).chain_count;
  const auto sid = h_c.mod(n);
  if (sid != parent.chain) return V::reject(RejectReason::BadProof, "chain hash maps to another sub-chain");
  if (b.proof->siblings.size() != merkle_depth(n)) return V::reject(RejectReason::BadProof, "proof depth");
  if (!merkle_verify(*b.root, *b.parent, *b.proof, sid, g.hasher())) {
    return V::reject(RejectReason::BadProof, "parent not under root");
  }

  const BlockRecord& guider = g.record(*b.guider);
  if (guider.view != parent.view) return V::reject(RejectReason::BadClock, "guider outside the parent's view");
  if (guider.block.clock < parent.block.clock) {
    return V::reject(RejectReason::BadClock, "guider older than parent");
  }
  if (guider.chain == parent.chain && guider.id != parent.id) {
    return V::reject(RejectReason::BadClock, "guider on the parent's sub-chain but not the parent");
  }
  if (guider.id != parent.id && guider.block.clock == parent.block.clock && parent.id < guider.id) {
    return V::reject(RejectReason::BadClock, "guider loses the clock tie to the parent");
  }
  return V::accept();
}

V check_genesis(const BlockGraph& g, const Block& b, const ProtocolParams& params,
                std::optional<ViewInfo>* opened) {
  if (b.root || b.proof || b.number != 0) {
    return V::reject(RejectReason::BadGenesisForm, "genesis with root, proof or non-zero number");
  }
  const BlockRecord& guider = g.record(*b.guider);
  if (!b.anchors.empty()) {
    if (std::adjacent_find(b.anchors.begin(), b.anchors.end()) != b.anchors.end()) {
      return V::reject(RejectReason::BadGenesisForm, "duplicate anchor");
    }
    if (pick_guider(g, b.anchors) != guider.id) {
      return V::reject(RejectReason::BadGenesisForm, "guider is not the latest anchor");
    }
    if (!g.find_view(b.anchors)) {
      auto resolution = resolve_view_change(g, b.anchors, params);
      if (!resolution.view) return V::reject(RejectReason::BadGenesisForm, resolution.reason);
      if (opened != nullptr) *opened = std::move(resolution.view);
    }
    return V::accept();
  }
  if (!guider.block.is_genesis() || guider.block.is_initial_genesis()) {
    return V::reject(RejectReason::BadGenesisForm, "genesis without anchors must follow a later-view genesis");
  }
  return V::accept();
}

V validate(const BlockGraph& g, const Block& b, const ProtocolParams& params, SampleCheck mode,
           std::optional<ViewInfo>* opened) {
  if (b.is_initial_genesis()) {
    if (block_id(b, g.hasher()) == g.genesis_root()) return V::accept();
    return V::reject(RejectReason::BadGenesisForm, "block without guider is not the initial genesis");
  }
  if (auto missing = g.missing_references(b); !missing.empty()) {
    throw Error(ErrorCode::UnresolvedReference, "unknown block " + missing.front().hex());
  }
  if (b.clock != g.block(*b.guider).clock + 1) return V::reject(RejectReason::BadClock, "clock is not guider + 1");
  const Digest h_c = chain_hash(b, g.hasher());
  if (b.weight != params.diff_required || !pow_valid(h_c, params.diff_required)) {
    return V::reject(RejectReason::BadPoW, "difficulty below target or wrong weight");
  }
  if (auto v = check_samples(g, b, params, mode); !v) return v;
  if (b.parent) return check_normal(g, b, h_c);
  return check_genesis(g, b, params, opened);
}

}  // namespace

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::BadClock: return "BadClock";
    case RejectReason::BadNumber: return "BadNumber";
    case RejectReason::BadProof: return "BadProof";
    case RejectReason::BadPoW: return "BadPoW";
    case RejectReason::BadSamples: return "BadSamples";
    case RejectReason::BadGenesisForm: return "BadGenesisForm";
    case RejectReason::SampleCapExceeded: return "SampleCapExceeded";
  }
  return "?";
}

ValidationVerdict validate_block(const BlockGraph& g, const Block& b, const ProtocolParams& params,
                                 SampleCheck mode) {
  Block canonical = b;
  canonicalize(canonical);
  return validate(g, canonical, params, mode, nullptr);
}

AcceptOutcome accept_block(BlockGraph& g, Block b, const ProtocolParams& params, SampleCheck mode) {
  canonicalize(b);
  AcceptOutcome out;
  out.id = block_id(b, g.hasher());
  if (g.contains(out.id)) return out;
  std::optional<ViewInfo> opened;
  out.verdict = validate(g, b, params, mode, &opened);
  if (!out.verdict) return out;
  if (opened) g.register_view(std::move(*opened));
  g.insert(std::move(b));
  out.inserted = true;
  return out;
}

}  // namespace balloon
