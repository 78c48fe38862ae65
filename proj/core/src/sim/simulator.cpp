#include "balloon/sim/simulator.hpp"

#include <algorithm>
#include <fstream>

#include "balloon/dump.hpp"
#include "balloon/errors.hpp"
#include "balloon/merkle.hpp"
#include "balloon/sampling.hpp"

namespace balloon::sim {
namespace {

Error invalid(const std::string& why) { return Error(ErrorCode::InvalidScenario, why); }

BlockGraph initial_graph(const NodeConfig& config, const ProtocolParams& params) {
  if (!config.preload_dump) return BlockGraph(make_initial_genesis(params));
  std::ifstream in(*config.preload_dump);
  if (!in) throw invalid("cannot open preload dump " + *config.preload_dump);
  BlockGraph g = read_dump(in);
  if (!(params_of(g) == params)) throw invalid("preload dump " + *config.preload_dump + " uses other parameters");
  return g;
}

std::size_t common_length(const std::vector<Digest>& a, const std::vector<Digest>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

}  // namespace

Timestamp to_time(const Rational& seconds) { return Timestamp((seconds * 1'000'000).floor()); }

NodeState::NodeState(std::uint32_t id, const NodeConfig& config, BlockGraph graph, std::uint64_t oracle_seed)
    : node_id(id),
      power_share(config.power_share),
      nominal_share(config.power_share),
      strategy(config.strategy),
      strategy_params(config.params),
      local_graph(std::move(graph)),
      oracle(PowOracle::simulated(oracle_seed)) {
  for (const auto& d : local_graph.insertion_order()) seen.insert(d);
}

const OrderingResult& NodeState::order(const ProtocolParams& params) {
  if (!order_) order_ = order_graph(local_graph, params);
  return *order_;
}

ProbeRecord ConsistencyMonitor::check(std::string name, Timestamp now, std::span<NodeState* const> nodes,
                                      const ProtocolParams& params) {
  ProbeRecord rec;
  rec.name = std::move(name);
  rec.time = now;
  std::vector<std::vector<Digest>> prefixes;
  for (NodeState* node : nodes) {
    const OrderingResult& order = node->order(params);
    SubtreeIndex index(node->local_graph);
    const std::size_t len = confirmed_prefix_length(order, index, params);
    prefixes.emplace_back(order.chain.blocks.begin(), order.chain.blocks.begin() + static_cast<std::ptrdiff_t>(len));

    NodeProbe np;
    np.node = node->node_id;
    np.ordered = order.chain.blocks.size();
    np.confirmed = len;
    np.chain_count = order.current_view().chain_count;
    np.view = order.current_view().view_number;
    if (len > 0) np.confirmed_head = order.chain.blocks[len - 1].hex();
    rec.nodes.push_back(std::move(np));

    const std::size_t agree = common_length(prefixes.back(), reference_);
    if (agree < std::min(len, reference_.size())) {
      rec.divergent = true;
      rec.first_divergence = std::min(rec.first_divergence.value_or(agree), agree);
    } else if (len > reference_.size()) {
      reference_ = prefixes.back();
    }
  }
  if (rec.divergent) ++violations_;

  rec.common_prefix = reference_.size();
  for (const auto& p : prefixes) rec.common_prefix = std::min(rec.common_prefix, common_length(p, reference_));

  std::int64_t total = 0;
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    for (const auto& d : prefixes[i]) {
      if (!confirmed_.insert(d).second) continue;
      const Block& b = nodes[i]->local_graph.block(d);
      if (b.is_initial_genesis()) continue;
      const Timestamp latency = now - b.timestamp;
      ++rec.newly_confirmed;
      total += latency.count();
      rec.latency_max = std::max(rec.latency_max, latency);
    }
  }
  if (rec.newly_confirmed > 0) rec.latency_mean = Timestamp(total / static_cast<std::int64_t>(rec.newly_confirmed));
  return rec;
}

ProbeRecord probe_consistency(std::span<NodeState* const> nodes, const ProtocolParams& params, Timestamp now) {
  ConsistencyMonitor monitor;
  return monitor.check("probe", now, nodes, params);
}

std::vector<SimEvent> adversary_step(const NodeState& state, Timestamp now) {
  std::vector<SimEvent> out;
  const StrategyParams& sp = state.strategy_params;
  switch (state.strategy) {
    case Strategy::Honest:
      break;
    case Strategy::PowerOscillator: {
      const Timestamp start = to_time(sp.start);
      const Timestamp period = to_time(sp.period);
      Timestamp drop = start;
      if (now >= start) drop = start + period * ((now - start) / period + 1);
      SimEvent down;
      down.kind = SimEvent::Kind::PowerChange;
      down.time = drop;
      down.node = state.node_id;
      down.share = state.nominal_share * sp.drop_to;
      down.adversarial = true;
      SimEvent up = down;
      up.time = drop + to_time(sp.drop_duration);
      up.share = state.nominal_share;
      up.cycle_end = true;
      out.push_back(std::move(down));
      out.push_back(std::move(up));
      break;
    }
    case Strategy::Withholder:
    case Strategy::ClockAttacker:
      if (!state.withheld.empty() && !state.release_pending) {
        SimEvent release;
        release.kind = SimEvent::Kind::Release;
        release.time = now + std::max(to_time(sp.horizon), Timestamp(1));
        release.node = state.node_id;
        out.push_back(std::move(release));
      }
      break;
  }
  return out;
}

Block mine_block_guided(const BlockGraph& g, const Snapshot& snapshot, const Digest& guider,
                        const ProtocolParams& params, PowOracle& oracle, Timestamp now,
                        std::vector<std::string> payload) {
  if (snapshot.blocks.empty()) throw Error(ErrorCode::EmptySnapshot, "cannot mine without a snapshot");
  const Hasher& hasher = g.hasher();
  Block b;
  b.root = merkle_root(snapshot.blocks, hasher);
  b.guider = guider;
  b.clock = g.block(guider).clock + 1;
  b.weight = params.diff_required;
  b.timestamp = now;
  b.payload = std::move(payload);
  b.samples = sample_digests(g, b, params);
  oracle.solve(b, params, hasher);

  const auto n_v = static_cast<std::uint32_t>(snapshot.blocks.size());
  const std::uint32_t sid = assign_chain(chain_hash(b, hasher), n_v);
  auto [parent, proof] = merkle_proof(snapshot.blocks, sid, hasher);
  b.parent = parent;
  b.proof = std::move(proof);
  b.number = g.block(parent).number + 1;
  return b;
}

Simulator::Simulator(ScenarioConfig config, std::uint64_t seed) : config_(std::move(config)), seed_(seed) {
  config_.validate();
  std::mt19937_64 master(seed);
  net_rng_.seed(master());
  nodes_.reserve(config_.nodes.size());
  for (std::size_t i = 0; i < config_.nodes.size(); ++i) {
    const std::uint64_t oracle_seed = master();
    nodes_.emplace_back(static_cast<std::uint32_t>(i), config_.nodes[i],
                        initial_graph(config_.nodes[i], config_.protocol), oracle_seed);
  }
  end_ = to_time(config_.duration);
  metrics_.summary.seed = seed;
  metrics_.summary.duration = end_;

  for (auto& node : nodes_) schedule_mining(node, Timestamp(0));
  for (const auto& entry : config_.schedule) {
    SimEvent e;
    e.time = to_time(entry.time);
    if (e.time > end_) continue;
    if (entry.kind == ScheduleEntry::Kind::PowerChange) {
      e.kind = SimEvent::Kind::PowerChange;
      e.node = entry.node;
      e.share = entry.share;
    } else {
      e.kind = SimEvent::Kind::Probe;
      e.name = entry.name;
    }
    queue_.push(std::move(e));
  }
  if (config_.probe_interval > 0) {
    const Timestamp step = to_time(config_.probe_interval);
    for (Timestamp t = step; step.count() > 0 && t <= end_; t += step) {
      SimEvent e;
      e.kind = SimEvent::Kind::Probe;
      e.time = t;
      e.name = "periodic@" + std::to_string(t.count());
      queue_.push(std::move(e));
    }
  }
  for (auto& node : nodes_) push_all(adversary_step(node, Timestamp(-1)));
}

void Simulator::push_all(std::vector<SimEvent> events) {
  for (auto& e : events) {
    if (e.kind == SimEvent::Kind::Release) nodes_[e.node].release_pending = true;
    queue_.push(std::move(e));
  }
}

void Simulator::schedule_mining(NodeState& node, Timestamp now) {
  ++node.generation;
  const double rate = node.power_share.to_double() * config_.block_rate.to_double();
  if (!(rate > 0)) return;
  SimEvent e;
  e.kind = SimEvent::Kind::MineSuccess;
  e.time = now + node.oracle.next_success(rate);
  e.node = node.node_id;
  e.generation = node.generation;
  queue_.push(std::move(e));
}

bool Simulator::in_burst(Timestamp t) const {
  return std::any_of(config_.network.bursts.begin(), config_.network.bursts.end(), [&](const BurstWindow& b) {
    const Timestamp start = to_time(b.start);
    return t >= start && t < start + to_time(b.duration);
  });
}

Timestamp Simulator::hop_delay(Timestamp now) {
  for (const auto& b : config_.network.bursts) {
    const Timestamp start = to_time(b.start);
    if (now >= start && now < start + to_time(b.duration)) {
      const Timestamp bound = std::max(to_time(config_.protocol.delay_bound), to_time(b.duration));
      std::uniform_int_distribution<std::int64_t> draw(1, bound.count());
      return Timestamp(draw(net_rng_));
    }
  }
  const std::int64_t base = to_time(config_.network.base_delay).count();
  std::uniform_int_distribution<std::int64_t> jitter(0, to_time(config_.network.jitter).count());
  return Timestamp(std::max<std::int64_t>(1, base + jitter(net_rng_)));
}

void Simulator::broadcast(std::uint32_t from, std::size_t wire, Timestamp now) {
  for (const auto& peer : nodes_) {
    if (peer.node_id == from) continue;
    SimEvent e;
    e.kind = SimEvent::Kind::Deliver;
    e.time = now + hop_delay(now);
    e.sent = now;
    e.node = peer.node_id;
    e.block = wire;
    queue_.push(std::move(e));
  }
}

void Simulator::on_mine(NodeState& node, Timestamp now) {
  const ProtocolParams& params = config_.protocol;
  BlockGraph& g = node.local_graph;
  std::vector<std::string> payload{"n" + std::to_string(node.node_id) + ":" + std::to_string(node.tx_counter++)};
  const OrderingResult& order = node.order(params);

  Block b;
  bool force = false;
  if (order.pending) {
    const PendingChange& p = *order.pending;
    b = mine_genesis(g, p.decision.anchors, p.known_geneses, params, node.oracle, now, std::move(payload));
    const auto sid = chain_hash(b, g.hasher()).mod(p.next_chain_count);
    if (p.covered[sid]) {
      ++metrics_.summary.geneses_discarded;
      schedule_mining(node, now);
      return;
    }
  } else if (node.strategy == Strategy::ClockAttacker && node.last_own && g.contains(*node.last_own) &&
             g.record(*node.last_own).view == order.current_view().view_index) {
    b = mine_block_guided(g, order.tips, *node.last_own, params, node.oracle, now, std::move(payload));
    force = true;
  } else {
    b = mine_block(g, order.tips, params, node.oracle, now, std::move(payload));
  }

  const AcceptOutcome outcome = accept_block(g, b, params, SampleCheck::Exact);
  Digest id = outcome.id;
  if (!outcome.verdict.accepted()) {
    if (!force) {
      ++metrics_.summary.self_rejections;
      schedule_mining(node, now);
      return;
    }
    id = g.insert(b);
  }
  node.invalidate();
  node.seen.insert(id);
  ++metrics_.summary.blocks_mined;

  const std::size_t wire = wire_.size();
  wire_.push_back(std::move(b));
  wire_ids_.push_back(id);
  origin_.push_back(node.node_id);
  wire_index_.emplace(id, wire);

  if (node.strategy == Strategy::Withholder || node.strategy == Strategy::ClockAttacker) {
    node.withheld.push_back(wire);
    if (node.strategy == Strategy::ClockAttacker) node.last_own = id;
    push_all(adversary_step(node, now));
  } else {
    broadcast(node.node_id, wire, now);
  }
  schedule_mining(node, now);
}

void Simulator::on_release(NodeState& node, Timestamp now) {
  node.release_pending = false;
  for (std::size_t w : node.withheld) broadcast(node.node_id, w, now);
  node.withheld.clear();
}

void Simulator::on_deliver(const SimEvent& e) {
  RunSummary& s = metrics_.summary;
  ++s.deliveries;
  const Timestamp latency = e.time - e.sent;
  if (!in_burst(e.sent)) {
    s.max_sync_latency = std::max(s.max_sync_latency, latency);
    if (latency > to_time(config_.protocol.delay_bound)) ++s.late_deliveries;
  }
  NodeState& node = nodes_[e.node];
  if (!node.seen.insert(wire_ids_[e.block]).second) return;

  const IngestReport report = ingest(node.local_graph, node.quarantine, wire_[e.block], config_.protocol);
  if (!report.accepted.empty()) node.invalidate();
  const auto from_attacker = [&](const Digest& d) {
    auto it = wire_index_.find(d);
    return it != wire_index_.end() && nodes_[origin_[it->second]].strategy == Strategy::ClockAttacker;
  };
  for (const auto& [id, verdict] : report.rejected) {
    ++s.rejections[std::string(to_string(*verdict.reason))];
    if (node.honest() && from_attacker(id)) ++s.attacker_blocks_rejected;
  }
  for (const auto& id : report.accepted) {
    if (node.honest() && from_attacker(id)) ++s.attacker_blocks_accepted;
    broadcast(node.node_id, wire_index_.at(id), e.time);
  }
}

void Simulator::on_power_change(const SimEvent& e) {
  NodeState& node = nodes_[e.node];
  node.power_share = e.share;
  if (!e.adversarial) node.nominal_share = e.share;
  schedule_mining(node, e.time);
  if (e.cycle_end) push_all(adversary_step(node, e.time));
}

void Simulator::probe(std::string name, Timestamp now) {
  std::vector<NodeState*> probed;
  for (auto& node : nodes_) {
    if (node.honest()) probed.push_back(&node);
  }
  if (probed.empty()) {
    for (auto& node : nodes_) probed.push_back(&node);
  }
  metrics_.probes.push_back(monitor_.check(std::move(name), now, probed, config_.protocol));
  metrics_.summary.safety_violations = monitor_.violations();
}

const Metrics& Simulator::run() {
  if (done_) return metrics_;
  try {
    Timestamp now{0};
    while (!queue_.empty()) {
      SimEvent e = queue_.pop();
      now = std::max(now, e.time);
      if (mining_open_ && e.time > end_) mining_open_ = false;
      switch (e.kind) {
        case SimEvent::Kind::MineSuccess:
          if (mining_open_ && e.generation == nodes_[e.node].generation) on_mine(nodes_[e.node], e.time);
          break;
        case SimEvent::Kind::Deliver:
          on_deliver(e);
          break;
        case SimEvent::Kind::Release:
          on_release(nodes_[e.node], e.time);
          break;
        case SimEvent::Kind::PowerChange:
          if (mining_open_) on_power_change(e);
          break;
        case SimEvent::Kind::Probe:
          if (mining_open_) probe(e.name, e.time);
          break;
      }
    }
    probe("final", std::max(now, end_));
    finish();
  } catch (const std::exception& ex) {
    metrics_.summary.error = ex.what();
    done_ = true;
    throw;
  }
  done_ = true;
  return metrics_;
}

void Simulator::finish() {
  NodeState* observer = &nodes_.front();
  for (auto& node : nodes_) {
    if (node.honest()) {
      observer = &node;
      break;
    }
  }
  const OrderingResult& order = observer->order(config_.protocol);
  const BlockGraph& g = observer->local_graph;
  for (std::size_t i = 0; i < order.segments.size(); ++i) {
    const ViewSegment& seg = order.segments[i];
    for (const auto& epoch : seg.epochs) {
      if (epoch.decision.pending) continue;
      for (std::size_t c = 0; c < epoch.ballots.size(); ++c) {
        EpochRecord rec;
        rec.view = seg.view.view_number;
        rec.epoch = epoch.epoch;
        rec.chain = static_cast<std::uint32_t>(c);
        if (c < epoch.rates.size()) rec.rate = epoch.rates[c];
        rec.vote = std::string(to_string(epoch.ballots[c]));
        metrics_.epochs.push_back(std::move(rec));
      }
    }
    if (!seg.change || i + 1 >= order.segments.size()) continue;
    const ViewDescriptor& next = order.segments[i + 1].view;
    ViewChangeRecord vc;
    vc.from_view = seg.view.view_number;
    vc.to_view = next.view_number;
    vc.old_chain_count = seg.view.chain_count;
    vc.new_chain_count = next.chain_count;
    vc.vote_up = seg.change->vote_up;
    vc.epoch = seg.change->epoch;
    vc.deviant_rates = seg.change->deviant_rates;
    vc.trigger_time = Timestamp::max();
    for (const auto& gen : next.geneses) vc.trigger_time = std::min(vc.trigger_time, g.block(gen).timestamp);
    metrics_.view_changes.push_back(std::move(vc));
  }
  RunSummary& s = metrics_.summary;
  s.view_changes = metrics_.view_changes.size();
  s.final_chain_count = order.current_view().chain_count;
  s.max_clock = g.max_clock();
  s.ordered_length = order.chain.blocks.size();
  for (const auto& np : metrics_.probes.back().nodes) {
    if (np.node == observer->node_id) s.confirmed_length = np.confirmed;
  }
}

Metrics run(const ScenarioConfig& config, std::uint64_t seed) {
  Simulator sim(config, seed);
  return sim.run();
}

}  // namespace balloon::sim
