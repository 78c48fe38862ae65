#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "balloon/params.hpp"
#include "balloon/rational.hpp"

namespace balloon::sim {

enum class Strategy { Honest, PowerOscillator, Withholder, ClockAttacker };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

/// Knobs for adversarial strategies; ignored by honest nodes.
struct StrategyParams {
  /// Withholder and clock attacker: seconds a mined block is kept private.
  Rational horizon{5};
  /// Power oscillator: the share drops at start, start + period, ...
  Rational start{0};
  Rational period{60};
  Rational drop_duration{20};
  /// Fraction of the node's nominal share kept while dropped.
  Rational drop_to{0};

  friend bool operator==(const StrategyParams&, const StrategyParams&) = default;
};

struct NodeConfig {
  Rational power_share{1};
  Strategy strategy = Strategy::Honest;
  StrategyParams params;
  /// Chain dump loaded into the node's graph before the run starts.
  std::optional<std::string> preload_dump;

  friend bool operator==(const NodeConfig&, const NodeConfig&) = default;
};

/// Deliveries sent inside [start, start + duration) may take up to
/// max(duration, delay bound) seconds.
struct BurstWindow {
  Rational start;
  Rational duration;
  friend bool operator==(const BurstWindow&, const BurstWindow&) = default;
};

/// Per-hop latency is base_delay + U(0, jitter) outside bursts. The declared
/// bound D is the protocol's delay_bound, and base_delay + jitter must not
/// exceed it.
struct NetworkModel {
  Rational base_delay{1, 10};
  Rational jitter{4, 10};
  std::vector<BurstWindow> bursts;
  friend bool operator==(const NetworkModel&, const NetworkModel&) = default;
};

struct ScheduleEntry {
  enum class Kind { PowerChange, Probe };
  Kind kind = Kind::Probe;
  Rational time;
  std::uint32_t node = 0;    ///< PowerChange
  Rational share;            ///< PowerChange: new share of the total block rate
  std::string name;          ///< Probe
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct ScenarioConfig {
  static constexpr int kSchemaVersion = 1;

  std::uint64_t seed = 1;
  Rational duration{600};
  /// Total expected blocks per second when shares sum to 1.
  Rational block_rate{1};
  ProtocolParams protocol;
  NetworkModel network;
  std::vector<NodeConfig> nodes{NodeConfig{}};
  std::vector<ScheduleEntry> schedule;
  /// Seconds between periodic consistency probes; 0 disables them.
  Rational probe_interval{0};

  /// Throws Error(InvalidScenario).
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// JSON text. Rationals accept numbers or "p/q" strings and are written as strings.
ScenarioConfig parse_scenario(std::string_view json_text);
std::string serialize_scenario(const ScenarioConfig& config);
/// Reads a scenario file. Relative preload paths are taken relative to the
/// file's directory.
ScenarioConfig load_scenario(const std::string& path);

}  // namespace balloon::sim
