#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "balloon/rational.hpp"

namespace balloon {

/// Immutable per-run protocol constants. They are recorded in the payload of
/// the initial genesis block so a chain dump is self-describing.
struct ProtocolParams {
  /// Fixed proof-of-work target; also the weight every block contributes.
  Rational diff_required{1};
  /// Ideal per-sub-chain concurrency level (expected samples per block).
  Rational reference_rate{2};
  /// A sub-chain votes for a change only when |rate - reference| / reference exceeds this.
  Rational vote_threshold{1, 4};
  /// Largest fractional reduction in sub-chain count allowed per view change.
  Rational max_downscale{1, 4};
  /// Epoch length in clocks.
  std::uint64_t epoch_length = 20;
  /// Minimum clock distance between a guider and its reference sampling block.
  std::uint64_t min_clock_gap = 2;
  /// The reference sampling block must be at least delay_multiplier * delay_bound older.
  std::uint64_t delay_multiplier = 2;
  /// Assumed propagation-delay bound, seconds.
  Rational delay_bound{1};
  /// Maximum number of sample hashes accepted in one block.
  std::uint64_t sample_cap = 64;
  /// Subtree-weight lead over every peer required for sub-chain confirmation.
  Rational confirm_margin{6};

  /// Throws Error(InvalidParams) when a constraint is violated.
  void validate() const;

  friend bool operator==(const ProtocolParams&, const ProtocolParams&) = default;
};

/// Payload entries of the initial genesis block.
std::vector<std::string> encode_params(const ProtocolParams& params);
/// Inverse of encode_params; throws Error(InvalidParams) on malformed input.
ProtocolParams decode_params(const std::vector<std::string>& payload);

}  // namespace balloon
