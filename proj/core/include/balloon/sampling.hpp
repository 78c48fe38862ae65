#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "balloon/graph.hpp"
#include "balloon/params.hpp"

namespace balloon {

/// Output of the sampling rule: the reference block b_st and every block with
/// the same clock that maps to its sub-chain, sorted by digest.
struct SampleSet {
  Digest reference;
  std::vector<Digest> members;
};

/// clock(b1) - clock(b2).
std::int64_t diff_clock(const BlockGraph& g, const Digest& b1, const Digest& b2);
/// timestamp(b1) - timestamp(b2) in seconds.
Rational diff_time(const BlockGraph& g, const Digest& b1, const Digest& b2);

/// Whether `elapsed` is at least delay_multiplier * delay_bound.
bool old_enough(Timestamp elapsed, const ProtocolParams& params);

/// Latest block on b's guider chain that is at least min_clock_gap clocks and
/// delay_multiplier * delay_bound seconds behind b's guider, or nullopt.
std::optional<Digest> find_reference(const BlockGraph& g, const Block& b, const ProtocolParams& params);

/// Views a and b lie on one line of descent through anchor links.
bool views_related(const BlockGraph& g, std::size_t a, std::size_t b);

/// Every block the rule admits for b, before the cap is applied.
std::optional<SampleSet> sample_candidates(const BlockGraph& g, const Block& b, const ProtocolParams& params);
/// Full sampling rule for b. Cross-view candidates are limited to views
/// related to the reference's view. More than sample_cap members keeps the
/// smallest digests. nullopt when there is no reference block.
std::optional<SampleSet> sample(const BlockGraph& g, const Block& b, const ProtocolParams& params);

/// Convenience: the samples field a miner writes for b (empty without a reference).
std::vector<Digest> sample_digests(const BlockGraph& g, const Block& b, const ProtocolParams& params);

/// Mean number of samples per block. Throws Error(EmptyEpoch).
Rational epoch_rate(std::span<const Block> blocks);
Rational epoch_rate(const BlockGraph& g, std::span<const Digest> blocks);

}  // namespace balloon
