#include "balloon/sim/metrics.hpp"

#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace balloon::sim {
namespace {

using json = nlohmann::ordered_json;

json record(const char* type) { return json{{"schema", kMetricsSchema}, {"type", type}}; }

json rationals(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(r.to_string());
  return out;
}

}  // namespace

void write_jsonl(std::ostream& out, const Metrics& m) {
  for (const auto& e : m.epochs) {
    json j = record("epoch");
    j["view"] = e.view;
    j["epoch"] = e.epoch;
    j["chain"] = e.chain;
    j["rate"] = e.rate ? json(e.rate->to_string()) : json(nullptr);
    j["vote"] = e.vote;
    out << j.dump() << '\n';
  }
  for (const auto& v : m.view_changes) {
    json j = record("view_change");
    j["from_view"] = v.from_view;
    j["to_view"] = v.to_view;
    j["old_chain_count"] = v.old_chain_count;
    j["new_chain_count"] = v.new_chain_count;
    j["vote_up"] = v.vote_up;
    j["epoch"] = v.epoch;
    j["deviant_rates"] = rationals(v.deviant_rates);
    j["trigger_time_us"] = v.trigger_time.count();
    out << j.dump() << '\n';
  }
  for (const auto& p : m.probes) {
    json j = record("probe");
    j["name"] = p.name;
    j["time_us"] = p.time.count();
    json nodes = json::array();
    for (const auto& n : p.nodes) {
      nodes.push_back({{"node", n.node},
                       {"ordered", n.ordered},
                       {"confirmed", n.confirmed},
                       {"chain_count", n.chain_count},
                       {"view", n.view},
                       {"confirmed_head", n.confirmed_head}});
    }
    j["nodes"] = std::move(nodes);
    j["common_prefix"] = p.common_prefix;
    j["divergent"] = p.divergent;
    j["first_divergence"] = p.first_divergence ? json(*p.first_divergence) : json(nullptr);
    j["newly_confirmed"] = p.newly_confirmed;
    j["latency_mean_us"] = p.latency_mean.count();
    j["latency_max_us"] = p.latency_max.count();
    out << j.dump() << '\n';
  }
  const RunSummary& s = m.summary;
  json j = record("summary");
  j["seed"] = s.seed;
  j["duration_us"] = s.duration.count();
  j["blocks_mined"] = s.blocks_mined;
  j["geneses_discarded"] = s.geneses_discarded;
  j["deliveries"] = s.deliveries;
  j["max_sync_latency_us"] = s.max_sync_latency.count();
  j["late_deliveries"] = s.late_deliveries;
  j["rejections"] = s.rejections;
  j["self_rejections"] = s.self_rejections;
  j["attacker_blocks_accepted"] = s.attacker_blocks_accepted;
  j["attacker_blocks_rejected"] = s.attacker_blocks_rejected;
  j["view_changes"] = s.view_changes;
  j["final_chain_count"] = s.final_chain_count;
  j["max_clock"] = s.max_clock;
  j["ordered_length"] = s.ordered_length;
  j["confirmed_length"] = s.confirmed_length;
  j["safety_violations"] = s.safety_violations;
  j["error"] = s.error ? json(*s.error) : json(nullptr);
  out << j.dump() << '\n';
}

std::string to_jsonl(const Metrics& m) {
  std::ostringstream out;
  write_jsonl(out, m);
  return out.str();
}

}  // namespace balloon::sim
