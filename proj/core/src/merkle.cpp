#include "balloon/merkle.hpp"

#include <array>

#include "balloon/errors.hpp"

namespace balloon {
namespace {

std::vector<Digest> next_layer(const std::vector<Digest>& layer, const Hasher& hasher) {
  std::vector<Digest> up;
  up.reserve((layer.size() + 1) / 2);
  for (std::size_t i = 0; i < layer.size(); i += 2) {
    const Digest& right = i + 1 < layer.size() ? layer[i + 1] : layer[i];
    up.push_back(merkle_node(layer[i], right, hasher));
  }
  return up;
}

std::vector<Digest> leaf_layer(std::span<const Digest> leaves, const Hasher& hasher) {
  std::vector<Digest> layer;
  layer.reserve(leaves.size());
  for (const auto& d : leaves) layer.push_back(merkle_leaf(d, hasher));
  return layer;
}

}  // namespace

Digest merkle_leaf(const Digest& value, const Hasher& hasher) {
  std::array<std::uint8_t, 1 + Digest::kSize> buf{};
  buf[0] = 0x00;
  std::copy(value.bytes.begin(), value.bytes.end(), buf.begin() + 1);
  return hasher.hash(buf);
}

Digest merkle_node(const Digest& left, const Digest& right, const Hasher& hasher) {
  std::array<std::uint8_t, 1 + 2 * Digest::kSize> buf{};
  buf[0] = 0x01;
  std::copy(left.bytes.begin(), left.bytes.end(), buf.begin() + 1);
  std::copy(right.bytes.begin(), right.bytes.end(), buf.begin() + 1 + Digest::kSize);
  return hasher.hash(buf);
}

Digest merkle_root(std::span<const Digest> leaves, const Hasher& hasher) {
  if (leaves.empty()) throw Error(ErrorCode::EmptySnapshot, "merkle root of an empty snapshot");
  auto layer = leaf_layer(leaves, hasher);
  while (layer.size() > 1) layer = next_layer(layer, hasher);
  return layer.front();
}

std::pair<Digest, MerkleProof> merkle_proof(std::span<const Digest> leaves, std::size_t index,
                                            const Hasher& hasher) {
  if (index >= leaves.size()) {
    throw Error(ErrorCode::SidOutOfRange,
                "index " + std::to_string(index) + " with " + std::to_string(leaves.size()) + " leaves");
  }
  MerkleProof proof;
  auto layer = leaf_layer(leaves, hasher);
  std::size_t pos = index;
  while (layer.size() > 1) {
    const std::size_t sibling = pos ^ 1U;
    proof.siblings.push_back(sibling < layer.size() ? layer[sibling] : layer[pos]);
    layer = next_layer(layer, hasher);
    pos /= 2;
  }
  return {leaves[index], std::move(proof)};
}

std::size_t merkle_depth(std::size_t leaf_count) {
  std::size_t depth = 0;
  for (std::size_t width = leaf_count; width > 1; width = (width + 1) / 2) ++depth;
  return depth;
}

bool merkle_verify(const Digest& root, const Digest& leaf_value, const MerkleProof& proof, std::size_t index,
                   const Hasher& hasher) {
  Digest acc = merkle_leaf(leaf_value, hasher);
  std::size_t pos = index;
  for (const auto& sibling : proof.siblings) {
    acc = (pos & 1U) == 0 ? merkle_node(acc, sibling, hasher) : merkle_node(sibling, acc, hasher);
    pos >>= 1U;
  }
  return pos == 0 && acc == root;
}

}  // namespace balloon
