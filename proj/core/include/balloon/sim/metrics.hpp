#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "balloon/block.hpp"
#include "balloon/rational.hpp"

namespace balloon::sim {

inline constexpr const char* kMetricsSchema = "balloon.metrics/1";

/// One sub-chain's ballot in one epoch of a main view.
struct EpochRecord {
  std::uint64_t view = 1;
  std::uint64_t epoch = 1;
  std::uint32_t chain = 0;
  std::optional<Rational> rate;  ///< empty on abstention
  std::string vote;
  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct ViewChangeRecord {
  std::uint64_t from_view = 1;
  std::uint64_t to_view = 2;
  std::uint32_t old_chain_count = 1;
  std::uint32_t new_chain_count = 1;
  bool vote_up = false;
  std::uint64_t epoch = 1;
  std::vector<Rational> deviant_rates;
  /// Earliest timestamp among the geneses that opened the new view.
  Timestamp trigger_time{0};
  friend bool operator==(const ViewChangeRecord&, const ViewChangeRecord&) = default;
};

struct NodeProbe {
  std::uint32_t node = 0;
  std::size_t ordered = 0;
  std::size_t confirmed = 0;
  std::uint32_t chain_count = 1;
  std::uint64_t view = 1;
  std::string confirmed_head;  ///< hex digest of the last confirmed block
  friend bool operator==(const NodeProbe&, const NodeProbe&) = default;
};

struct ProbeRecord {
  std::string name;
  Timestamp time{0};
  std::vector<NodeProbe> nodes;
  /// Length of the longest confirmed prefix every probed node agrees with.
  std::size_t common_prefix = 0;
  bool divergent = false;
  std::optional<std::size_t> first_divergence;
  std::size_t newly_confirmed = 0;
  Timestamp latency_mean{0};
  Timestamp latency_max{0};
  friend bool operator==(const ProbeRecord&, const ProbeRecord&) = default;
};

struct RunSummary {
  std::uint64_t seed = 0;
  Timestamp duration{0};
  std::uint64_t blocks_mined = 0;
  std::uint64_t geneses_discarded = 0;
  std::uint64_t deliveries = 0;
  Timestamp max_sync_latency{0};
  std::uint64_t late_deliveries = 0;  ///< outside bursts and slower than the delay bound
  std::map<std::string, std::uint64_t> rejections;
  std::uint64_t self_rejections = 0;
  std::uint64_t attacker_blocks_accepted = 0;
  std::uint64_t attacker_blocks_rejected = 0;
  std::uint64_t view_changes = 0;
  std::uint32_t final_chain_count = 1;
  std::uint64_t max_clock = 0;
  std::size_t ordered_length = 0;
  std::size_t confirmed_length = 0;
  std::uint64_t safety_violations = 0;
  std::optional<std::string> error;
  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

/// Everything a run reports. Records are appended in event order; epoch and
/// view-change records are taken from the observer node's final ordering.
struct Metrics {
  std::vector<EpochRecord> epochs;
  std::vector<ViewChangeRecord> view_changes;
  std::vector<ProbeRecord> probes;
  RunSummary summary;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// One JSON object per line, each with "schema" and "type" fields; the
/// summary record comes last.
void write_jsonl(std::ostream& out, const Metrics& m);
std::string to_jsonl(const Metrics& m);

}  // namespace balloon::sim
