#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "balloon/mining.hpp"
#include "balloon/ordering.hpp"
#include "balloon/quarantine.hpp"
#include "balloon/sim/metrics.hpp"
#include "balloon/sim/scenario.hpp"

namespace balloon::sim {

struct SimEvent {
  enum class Kind { MineSuccess, Deliver, PowerChange, Probe, Release };
  Timestamp time{0};
  std::uint64_t seq = 0;  ///< assigned by the queue
  Kind kind = Kind::Probe;
  std::uint32_t node = 0;
  std::size_t block = 0;       ///< Deliver: index into the simulator's wire log
  Timestamp sent{0};           ///< Deliver: when the hop started
  Rational share;              ///< PowerChange
  bool adversarial = false;    ///< PowerChange issued by an oscillator rather than the schedule
  bool cycle_end = false;      ///< the oscillator's restore event
  std::uint64_t generation = 0;  ///< MineSuccess: stale draws are skipped
  std::string name;            ///< Probe
};

struct EventOrder {
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    return a.time != b.time ? a.time > b.time : a.seq > b.seq;
  }
};

class EventQueue {
 public:
  void push(SimEvent e) {
    e.seq = next_seq_++;
    heap_.push(std::move(e));
  }
  SimEvent pop() {
    SimEvent e = heap_.top();
    heap_.pop();
    return e;
  }
  bool empty() const { return heap_.empty(); }
  const SimEvent& top() const { return heap_.top(); }
  std::size_t size() const { return heap_.size(); }

 private:
  std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> heap_;
  std::uint64_t next_seq_ = 0;
};

struct NodeState {
  NodeState(std::uint32_t id, const NodeConfig& config, BlockGraph graph, std::uint64_t oracle_seed);

  std::uint32_t node_id = 0;
  Rational power_share;
  Rational nominal_share;
  Strategy strategy = Strategy::Honest;
  StrategyParams strategy_params;
  BlockGraph local_graph;
  Quarantine quarantine;
  PowOracle oracle;
  std::uint64_t generation = 0;
  std::uint64_t tx_counter = 0;
  std::unordered_set<Digest> seen;
  std::vector<std::size_t> withheld;  ///< wire indices not yet broadcast
  bool release_pending = false;
  std::optional<Digest> last_own;     ///< clock attacker: head of its private guider chain

  bool honest() const { return strategy == Strategy::Honest; }
  const OrderingResult& order(const ProtocolParams& params);
  void invalidate() { order_.reset(); }

 private:
  std::optional<OrderingResult> order_;
};

/// Tracks the longest confirmed prefix ever observed. A node whose confirmed
/// prefix is not a prefix of it (or vice versa) is a safety violation.
class ConsistencyMonitor {
 public:
  ProbeRecord check(std::string name, Timestamp now, std::span<NodeState* const> nodes,
                    const ProtocolParams& params);
  const std::vector<Digest>& reference() const { return reference_; }
  std::uint64_t violations() const { return violations_; }

 private:
  std::vector<Digest> reference_;
  std::set<Digest> confirmed_;
  std::uint64_t violations_ = 0;
};

/// One-shot comparison of the nodes' confirmed prefixes.
ProbeRecord probe_consistency(std::span<NodeState* const> nodes, const ProtocolParams& params,
                              Timestamp now = Timestamp{0});

/// Follow-up events an adversarial node schedules, all strictly after `now`:
/// the next share drop and restore for an oscillator, a delayed release for a
/// node holding private blocks. Empty for honest nodes.
std::vector<SimEvent> adversary_step(const NodeState& state, Timestamp now);

/// Like mine_block, but with the guider forced to `guider` regardless of the
/// snapshot. Used by the clock attacker.
Block mine_block_guided(const BlockGraph& g, const Snapshot& snapshot, const Digest& guider,
                        const ProtocolParams& params, PowOracle& oracle, Timestamp now,
                        std::vector<std::string> payload = {});

class Simulator {
 public:
  /// Throws Error(InvalidScenario).
  Simulator(ScenarioConfig config, std::uint64_t seed);

  /// Runs to the scenario end, stops mining, drains in-flight traffic and
  /// takes a final probe.
  const Metrics& run();
  const Metrics& metrics() const { return metrics_; }
  std::span<NodeState> nodes() { return nodes_; }
  const ScenarioConfig& config() const { return config_; }

 private:
  void schedule_mining(NodeState& node, Timestamp now);
  void broadcast(std::uint32_t from, std::size_t wire, Timestamp now);
  void on_mine(NodeState& node, Timestamp now);
  void on_deliver(const SimEvent& e);
  void on_release(NodeState& node, Timestamp now);
  void on_power_change(const SimEvent& e);
  void probe(std::string name, Timestamp now);
  void push_all(std::vector<SimEvent> events);
  Timestamp hop_delay(Timestamp now);
  bool in_burst(Timestamp t) const;
  void finish();

  ScenarioConfig config_;
  std::uint64_t seed_;
  std::vector<NodeState> nodes_;
  std::vector<Block> wire_;  // every mined block, in mining order
  std::vector<Digest> wire_ids_;
  std::vector<std::uint32_t> origin_;
  std::unordered_map<Digest, std::size_t> wire_index_;
  EventQueue queue_;
  std::mt19937_64 net_rng_;
  ConsistencyMonitor monitor_;
  Metrics metrics_;
  Timestamp end_{0};
  bool mining_open_ = true;
  bool done_ = false;
};

/// Convenience wrapper: build, run and return the metrics.
Metrics run(const ScenarioConfig& config, std::uint64_t seed);

/// Converts seconds to simulator time, rounding down to a microsecond.
Timestamp to_time(const Rational& seconds);

}  // namespace balloon::sim
