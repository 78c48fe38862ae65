#include "balloon/sim/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "balloon/errors.hpp"

namespace balloon::sim {
namespace {

using nlohmann::json;

Error invalid(const std::string& why) { return Error(ErrorCode::InvalidScenario, why); }

Rational rational_from(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number()) return Rational::parse(j.dump());
  } catch (const std::exception& e) {
    throw invalid(where + ": " + e.what());
  }
  throw invalid(where + ": expected a number or \"p/q\" string");
}

std::uint64_t u64_from(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw invalid(where + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw invalid(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) throw invalid(where + ": unknown key '" + key + "'");
  }
}

// Reads obj[key] into out when present.
template <typename F>
void read(const json& obj, const char* key, F&& assign) {
  if (auto it = obj.find(key); it != obj.end()) assign(*it);
}

ProtocolParams protocol_from(const json& j) {
  check_keys(j, "protocol",
             {"diff_required", "reference_rate", "vote_threshold", "max_downscale", "epoch_length", "min_clock_gap",
              "delay_multiplier", "delay_bound", "sample_cap", "confirm_margin"});
  ProtocolParams p;
  auto rat = [&](const char* key, Rational& out) {
    read(j, key, [&](const json& v) { out = rational_from(v, std::string("protocol.") + key); });
  };
  auto u64 = [&](const char* key, std::uint64_t& out) {
    read(j, key, [&](const json& v) { out = u64_from(v, std::string("protocol.") + key); });
  };
  rat("diff_required", p.diff_required);
  rat("reference_rate", p.reference_rate);
  rat("vote_threshold", p.vote_threshold);
  rat("max_downscale", p.max_downscale);
  u64("epoch_length", p.epoch_length);
  u64("min_clock_gap", p.min_clock_gap);
  u64("delay_multiplier", p.delay_multiplier);
  rat("delay_bound", p.delay_bound);
  u64("sample_cap", p.sample_cap);
  rat("confirm_margin", p.confirm_margin);
  return p;
}

json protocol_to(const ProtocolParams& p) {
  return {
      {"diff_required", p.diff_required.to_string()},
      {"reference_rate", p.reference_rate.to_string()},
      {"vote_threshold", p.vote_threshold.to_string()},
      {"max_downscale", p.max_downscale.to_string()},
      {"epoch_length", p.epoch_length},
      {"min_clock_gap", p.min_clock_gap},
      {"delay_multiplier", p.delay_multiplier},
      {"delay_bound", p.delay_bound.to_string()},
      {"sample_cap", p.sample_cap},
      {"confirm_margin", p.confirm_margin.to_string()},
  };
}

StrategyParams strategy_params_from(const json& j, const std::string& where) {
  check_keys(j, where, {"horizon", "start", "period", "drop_duration", "drop_to"});
  StrategyParams s;
  read(j, "horizon", [&](const json& v) { s.horizon = rational_from(v, where + ".horizon"); });
  read(j, "start", [&](const json& v) { s.start = rational_from(v, where + ".start"); });
  read(j, "period", [&](const json& v) { s.period = rational_from(v, where + ".period"); });
  read(j, "drop_duration", [&](const json& v) { s.drop_duration = rational_from(v, where + ".drop_duration"); });
  read(j, "drop_to", [&](const json& v) { s.drop_to = rational_from(v, where + ".drop_to"); });
  return s;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Honest: return "honest";
    case Strategy::PowerOscillator: return "power_oscillator";
    case Strategy::Withholder: return "withholder";
    case Strategy::ClockAttacker: return "clock_attacker";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  for (auto s : {Strategy::Honest, Strategy::PowerOscillator, Strategy::Withholder, Strategy::ClockAttacker}) {
    if (to_string(s) == text) return s;
  }
  throw invalid("unknown strategy '" + std::string(text) + "'");
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw invalid(what);
  };
  try {
    protocol.validate();
  } catch (const Error& e) {
    throw invalid(e.what());
  }
  require(duration >= 0, "duration must not be negative");
  require(block_rate > 0, "block_rate must be positive");
  require(probe_interval >= 0, "probe_interval must not be negative");
  require(!nodes.empty(), "at least one node is required");
  Rational total;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    const std::string where = "node " + std::to_string(i);
    require(n.power_share >= 0, where + ": power_share must not be negative");
    require(n.params.horizon >= 0, where + ": horizon must not be negative");
    require(n.params.start >= 0, where + ": start must not be negative");
    require(n.params.period > 0, where + ": period must be positive");
    require(n.params.drop_duration >= 0 && n.params.drop_duration <= n.params.period,
            where + ": drop_duration must lie in [0, period]");
    require(n.params.drop_to >= 0 && n.params.drop_to <= 1, where + ": drop_to must lie in [0, 1]");
    total += n.power_share;
  }
  require(total == 1, "power shares sum to " + total.to_string() + ", expected 1");
  require(network.base_delay >= 0 && network.jitter >= 0, "delays must not be negative");
  require(network.base_delay + network.jitter <= protocol.delay_bound,
          "base_delay + jitter exceeds the protocol delay_bound");
  for (const auto& b : network.bursts) {
    require(b.start >= 0 && b.duration > 0, "burst windows need start >= 0 and duration > 0");
  }
  for (const auto& e : schedule) {
    require(e.time >= 0, "schedule times must not be negative");
    if (e.kind == ScheduleEntry::Kind::PowerChange) {
      require(e.node < nodes.size(), "power_change names an unknown node");
      require(e.share >= 0, "power_change share must not be negative");
    }
  }
}

ScenarioConfig parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw invalid(std::string("not valid JSON: ") + e.what());
  }
  check_keys(root, "scenario",
             {"schema_version", "seed", "duration", "block_rate", "protocol", "network", "nodes", "schedule",
              "probe_interval"});
  ScenarioConfig c;
  read(root, "schema_version", [&](const json& v) {
    if (u64_from(v, "schema_version") != ScenarioConfig::kSchemaVersion) throw invalid("unsupported schema_version");
  });
  read(root, "seed", [&](const json& v) { c.seed = u64_from(v, "seed"); });
  read(root, "duration", [&](const json& v) { c.duration = rational_from(v, "duration"); });
  read(root, "block_rate", [&](const json& v) { c.block_rate = rational_from(v, "block_rate"); });
  read(root, "probe_interval", [&](const json& v) { c.probe_interval = rational_from(v, "probe_interval"); });
  read(root, "protocol", [&](const json& v) { c.protocol = protocol_from(v); });
  read(root, "network", [&](const json& v) {
    check_keys(v, "network", {"base_delay", "jitter", "bursts"});
    read(v, "base_delay", [&](const json& x) { c.network.base_delay = rational_from(x, "network.base_delay"); });
    read(v, "jitter", [&](const json& x) { c.network.jitter = rational_from(x, "network.jitter"); });
    read(v, "bursts", [&](const json& arr) {
      if (!arr.is_array()) throw invalid("network.bursts: expected an array");
      for (const auto& b : arr) {
        check_keys(b, "network.bursts[]", {"start", "duration"});
        BurstWindow w;
        read(b, "start", [&](const json& x) { w.start = rational_from(x, "burst.start"); });
        read(b, "duration", [&](const json& x) { w.duration = rational_from(x, "burst.duration"); });
        c.network.bursts.push_back(w);
      }
    });
  });
  read(root, "nodes", [&](const json& arr) {
    if (!arr.is_array()) throw invalid("nodes: expected an array");
    c.nodes.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "nodes[" + std::to_string(i) + "]";
      const json& n = arr[i];
      check_keys(n, where, {"power_share", "strategy", "params", "preload_dump"});
      NodeConfig node;
      read(n, "power_share", [&](const json& x) { node.power_share = rational_from(x, where + ".power_share"); });
      read(n, "strategy", [&](const json& x) {
        if (!x.is_string()) throw invalid(where + ".strategy: expected a string");
        node.strategy = parse_strategy(x.get<std::string>());
      });
      read(n, "params", [&](const json& x) { node.params = strategy_params_from(x, where + ".params"); });
      read(n, "preload_dump", [&](const json& x) {
        if (!x.is_string()) throw invalid(where + ".preload_dump: expected a path");
        node.preload_dump = x.get<std::string>();
      });
      c.nodes.push_back(std::move(node));
    }
  });
  read(root, "schedule", [&](const json& arr) {
    if (!arr.is_array()) throw invalid("schedule: expected an array");
    for (const auto& e : arr) {
      check_keys(e, "schedule[]", {"kind", "time", "node", "share", "name"});
      ScheduleEntry entry;
      const auto kind = e.value("kind", std::string());
      if (kind == "power_change") {
        entry.kind = ScheduleEntry::Kind::PowerChange;
      } else if (kind == "probe") {
        entry.kind = ScheduleEntry::Kind::Probe;
      } else {
        throw invalid("schedule[].kind must be power_change or probe");
      }
      read(e, "time", [&](const json& x) { entry.time = rational_from(x, "schedule[].time"); });
      read(e, "node", [&](const json& x) { entry.node = static_cast<std::uint32_t>(u64_from(x, "schedule[].node")); });
      read(e, "share", [&](const json& x) { entry.share = rational_from(x, "schedule[].share"); });
      read(e, "name", [&](const json& x) { entry.name = x.get<std::string>(); });
      c.schedule.push_back(std::move(entry));
    }
  });
  c.validate();
  return c;
}

std::string serialize_scenario(const ScenarioConfig& c) {
  json nodes = json::array();
  for (const auto& n : c.nodes) {
    json node = {
        {"power_share", n.power_share.to_string()},
        {"strategy", std::string(to_string(n.strategy))},
        {"params",
         {{"horizon", n.params.horizon.to_string()},
          {"start", n.params.start.to_string()},
          {"period", n.params.period.to_string()},
          {"drop_duration", n.params.drop_duration.to_string()},
          {"drop_to", n.params.drop_to.to_string()}}},
    };
    if (n.preload_dump) node["preload_dump"] = *n.preload_dump;
    nodes.push_back(std::move(node));
  }
  json bursts = json::array();
  for (const auto& b : c.network.bursts) {
    bursts.push_back({{"start", b.start.to_string()}, {"duration", b.duration.to_string()}});
  }
  json schedule = json::array();
  for (const auto& e : c.schedule) {
    if (e.kind == ScheduleEntry::Kind::PowerChange) {
      schedule.push_back({{"kind", "power_change"},
                          {"time", e.time.to_string()},
                          {"node", e.node},
                          {"share", e.share.to_string()}});
    } else {
      schedule.push_back({{"kind", "probe"}, {"time", e.time.to_string()}, {"name", e.name}});
    }
  }
  json root = {
      {"schema_version", ScenarioConfig::kSchemaVersion},
      {"seed", c.seed},
      {"duration", c.duration.to_string()},
      {"block_rate", c.block_rate.to_string()},
      {"probe_interval", c.probe_interval.to_string()},
      {"protocol", protocol_to(c.protocol)},
      {"network",
       {{"base_delay", c.network.base_delay.to_string()}, {"jitter", c.network.jitter.to_string()}, {"bursts", bursts}}},
      {"nodes", nodes},
      {"schedule", schedule},
  };
  return root.dump(2) + "\n";
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  ScenarioConfig c = parse_scenario(buf.str());
  const auto base = std::filesystem::path(path).parent_path();
  for (auto& n : c.nodes) {
    if (n.preload_dump && std::filesystem::path(*n.preload_dump).is_relative()) {
      n.preload_dump = (base / *n.preload_dump).string();
    }
  }
  return c;
}

}  // namespace balloon::sim
