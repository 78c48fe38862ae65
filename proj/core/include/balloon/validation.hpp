#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "balloon/graph.hpp"
#include "balloon/params.hpp"

namespace balloon {

enum class RejectReason { BadClock, BadNumber, BadProof, BadPoW, BadSamples, BadGenesisForm, SampleCapExceeded };

std::string_view to_string(RejectReason r);

struct ValidationVerdict {
  std::optional<RejectReason> reason;  ///< empty means Accept
  std::string detail;

  bool accepted() const { return !reason.has_value(); }
  explicit operator bool() const { return accepted(); }
  static ValidationVerdict accept() { return {}; }
  static ValidationVerdict reject(RejectReason r, std::string detail) { return {r, std::move(detail)}; }
};

/// Exact: samples must equal the recomputed set. Relaxed: samples must be a
/// subset of it that contains the reference block (or is already at the cap),
/// which tolerates same-clock blocks the miner had not yet received.
enum class SampleCheck { Exact, Relaxed };

/// Checks every block rule against the graph. Pure. All references of b must
/// resolve; otherwise throws Error(UnresolvedReference).
ValidationVerdict validate_block(const BlockGraph& g, const Block& b, const ProtocolParams& params,
                                 SampleCheck mode = SampleCheck::Exact);

struct AcceptOutcome {
  Digest id;
  ValidationVerdict verdict;
  bool inserted = false;  ///< false for rejects and for blocks already present
};

/// Validates b, registers the view it opens (if any) and inserts it.
AcceptOutcome accept_block(BlockGraph& g, Block b, const ProtocolParams& params,
                           SampleCheck mode = SampleCheck::Exact);

}  // namespace balloon
