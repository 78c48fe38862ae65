#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "balloon/block.hpp"
#include "balloon/digest.hpp"

namespace balloon {

// Binary merkle tree over an ordered list of digests.
//   leaf(h)    = H(0x00 || h)
//   node(l, r) = H(0x01 || l || r)
// A layer with an odd number of nodes pairs its last node with itself.

Digest merkle_leaf(const Digest& value, const Hasher& hasher);
Digest merkle_node(const Digest& left, const Digest& right, const Hasher& hasher);

/// Throws Error(EmptySnapshot) for an empty list.
Digest merkle_root(std::span<const Digest> leaves, const Hasher& hasher);

/// Returns leaves[index] and its inclusion path. Throws Error(SidOutOfRange).
std::pair<Digest, MerkleProof> merkle_proof(std::span<const Digest> leaves, std::size_t index,
                                            const Hasher& hasher);

/// Number of siblings in a proof for a tree with `leaf_count` leaves.
std::size_t merkle_depth(std::size_t leaf_count);

bool merkle_verify(const Digest& root, const Digest& leaf_value, const MerkleProof& proof, std::size_t index,
                   const Hasher& hasher);

}  // namespace balloon
