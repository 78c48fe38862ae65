#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "balloon/graph.hpp"
#include "balloon/ordering.hpp"
#include "balloon/validation.hpp"

namespace balloon {

/// One hex-encoded block per line in insertion order, initial genesis first.
/// Blank lines and lines starting with '#' are ignored on input.
void write_dump(std::ostream& out, const BlockGraph& g);

/// Rebuilds a graph by validating every line in order. The parameters come
/// from the initial genesis payload. Throws Error(MalformedDump) with the
/// offending line number.
BlockGraph read_dump(std::istream& in, SampleCheck mode = SampleCheck::Relaxed,
                     std::shared_ptr<const Hasher> hasher = sha256_hasher());

/// Parameters recorded in the graph's initial genesis.
ProtocolParams params_of(const BlockGraph& g);

/// Tab-separated: position, digest, view number, clock, sub-chain id.
void write_order(std::ostream& out, const OrderedChain& chain, const BlockGraph& g);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

}  // namespace balloon
