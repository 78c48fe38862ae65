#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "balloon/digest.hpp"
#include "balloon/params.hpp"
#include "balloon/rational.hpp"

namespace balloon {

/// Simulated wall time since the start of a run.
using Timestamp = std::chrono::microseconds;

/// Sibling hashes from leaf level to the root. The leaf position is the
/// sub-chain id of the block carrying the proof and is not stored.
struct MerkleProof {
  std::vector<Digest> siblings;
  friend bool operator==(const MerkleProof&, const MerkleProof&) = default;
};

/// One record for normal blocks and every kind of genesis block.
struct Block {
  std::optional<Digest> root;     ///< merkle root over the miner's snapshot; null for geneses
  std::optional<Digest> guider;   ///< null only for the initial genesis
  std::uint64_t clock = 0;        ///< length of the guider chain
  std::vector<Digest> samples;    ///< treated as a set
  std::uint64_t nonce = 0;
  std::optional<Digest> parent;   ///< null for every genesis
  std::optional<MerkleProof> proof;
  std::uint64_t number = 0;       ///< sub-chain height
  std::vector<Digest> anchors;    ///< set; non-empty only on the first genesis of a view
  Rational weight{1};
  Timestamp timestamp{0};
  std::vector<std::string> payload;

  bool is_genesis() const { return !parent.has_value(); }
  bool is_initial_genesis() const { return !guider.has_value(); }

  friend bool operator==(const Block&, const Block&) = default;
};

/// Preimage of the chain hash: every field except parent, number and proof,
/// in the order root, guider, clock, samples, nonce, anchors, weight,
/// timestamp, payload. number follows from the parent, which the chain hash
/// selects, so it is left out along with it. samples and anchors are written sorted. See
/// docs/FORMATS.md for the byte layout.
std::vector<std::uint8_t> encode_chain_fields(const Block& b);
/// Chain-field encoding followed by parent, number and proof.
std::vector<std::uint8_t> encode_block(const Block& b);
/// Throws Error(MalformedBlock) on truncated or trailing input.
Block decode_block(std::span<const std::uint8_t> bytes);

Digest chain_hash(const Block& b, const Hasher& hasher);
/// Identity of a block inside a graph: hash over the full encoding.
Digest block_id(const Block& b, const Hasher& hasher);

/// The initial genesis g0 with the parameters recorded in its payload.
Block make_initial_genesis(const ProtocolParams& params);

/// Canonical in-memory form: samples and anchors sorted ascending.
void canonicalize(Block& b);

}  // namespace balloon
