#pragma once

#include "balloon/sim/simulator.hpp"

namespace balloon::bench {

/// Honest network of `nodes` equal miners at 4 blocks/s. With adapt set, the
/// epoch is short enough for view changes to happen during the run.
inline sim::ScenarioConfig network(int nodes, std::int64_t seconds, bool adapt) {
  sim::ScenarioConfig c;
  c.duration = Rational(seconds);
  c.block_rate = 4;
  c.protocol.reference_rate = 2;
  c.protocol.epoch_length = adapt ? 20 : 1'000'000;
  c.network.base_delay = Rational(1, 10);
  c.network.jitter = Rational(9, 10);
  sim::NodeConfig node;
  node.power_share = Rational(1, nodes);
  c.nodes.assign(static_cast<std::size_t>(nodes), node);
  return c;
}

/// Local graph of the first node after a run.
inline BlockGraph simulated(const sim::ScenarioConfig& c, std::uint64_t seed = 1) {
  sim::Simulator s(c, seed);
  s.run();
  return s.nodes().front().local_graph;
}

}  // namespace balloon::bench
