#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "balloon/graph.hpp"
#include "balloon/params.hpp"

namespace balloon {

/// Latest main block of every sub-chain in the miner's current view, indexed
/// by sub-chain id.
struct Snapshot {
  std::vector<Digest> blocks;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// difficulty(h) = 2^64 / (top 64 bits of h + 1). A block meets a target when
/// its chain hash has difficulty >= diff_required; a target of 1 admits every
/// hash.
bool pow_valid(const Digest& chain_hash, const Rational& diff_required);
bool pow_valid(const Block& b, const Rational& diff_required, const Hasher& hasher);

/// Big-endian value of h_c modulo n_v.
std::uint32_t assign_chain(const Digest& h_c, std::uint32_t n_v);

/// Source of nonces. Grind mode searches nonces up to a budget. Simulated mode
/// also hands out inter-success times from a seeded exponential distribution
/// so a simulator can schedule mining events; its nonce search starts from a
/// running counter and only iterates when diff_required > 1.
class PowOracle {
 public:
  enum class Mode { Grind, Simulated };

  static PowOracle grind(std::uint64_t budget = std::uint64_t{1} << 24);
  static PowOracle simulated(std::uint64_t seed, std::uint64_t budget = std::uint64_t{1} << 24);

  Mode mode() const { return mode_; }

  /// Sets b.nonce so that chain_hash(b) meets diff_required. Throws Error(OracleExhausted).
  void solve(Block& b, const ProtocolParams& params, const Hasher& hasher);

  /// Waiting time until the next success at `rate` successes per second.
  Timestamp next_success(double rate);

 private:
  PowOracle(Mode mode, std::uint64_t seed, std::uint64_t budget) : mode_(mode), budget_(budget), rng_(seed) {}

  Mode mode_;
  std::uint64_t budget_;
  std::uint64_t counter_ = 0;
  std::mt19937_64 rng_;
};

/// Block in the snapshot with the largest clock; the smaller digest wins ties.
Digest pick_guider(const BlockGraph& g, std::span<const Digest> candidates);

/// Assembles, solves and attaches a new normal block on top of `snapshot`.
/// Throws Error(EmptySnapshot) or Error(OracleExhausted).
Block mine_block(const BlockGraph& g, const Snapshot& snapshot, const ProtocolParams& params, PowOracle& oracle,
                 Timestamp now, std::vector<std::string> payload = {});

}  // namespace balloon
