#include "fixtures.hpp"

#include <algorithm>
#include <stdexcept>

#include "balloon/dump.hpp"
#include "balloon/sim/simulator.hpp"
#include "balloon/validation.hpp"

namespace balloon::testing {

ProtocolParams single_view_params() {
  ProtocolParams p;
  p.epoch_length = 1'000'000;
  return p;
}

ProtocolParams fig1_params() {
  ProtocolParams p;
  p.epoch_length = 2;
  p.min_clock_gap = 1;
  p.delay_multiplier = 1;
  p.delay_bound = 1;
  p.reference_rate = Rational(1, 2);
  return p;
}

GraphBuilder::GraphBuilder(ProtocolParams params, std::uint64_t seed, Timestamp step)
    : params_(params), g_(make_initial_genesis(params)), oracle_(PowOracle::simulated(seed)), step_(step) {
  now_ = step_;
}

Block GraphBuilder::draft(const Snapshot& snapshot, std::vector<std::string> payload) {
  return mine_block(g_, snapshot, params_, oracle_, now_, std::move(payload));
}

Digest GraphBuilder::commit(Block b) {
  const AcceptOutcome out = accept_block(g_, std::move(b), params_, SampleCheck::Exact);
  if (!out.verdict) {
    throw std::runtime_error("fixture block rejected: " + std::string(to_string(*out.verdict.reason)) + " (" +
                             out.verdict.detail + ")");
  }
  now_ += step_;
  return out.id;
}

Digest GraphBuilder::mine(const Snapshot& snapshot, std::vector<std::string> payload) {
  if (payload.empty()) payload.push_back("tx" + std::to_string(tag_++));
  return commit(draft(snapshot, std::move(payload)));
}

Digest GraphBuilder::mine_on(const Digest& parent, std::vector<std::string> payload) {
  return mine(Snapshot{{parent}}, std::move(payload));
}

Digest GraphBuilder::mine_for_chain(const Snapshot& snapshot, std::uint32_t sid) {
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    Block b = draft(snapshot, {"tx" + std::to_string(tag_++)});
    if (*b.parent == snapshot.blocks.at(sid)) return commit(std::move(b));
  }
  throw std::runtime_error("no block for sub-chain " + std::to_string(sid));
}

Digest GraphBuilder::genesis(const std::vector<Digest>& anchors, const std::vector<Digest>& known,
                             std::optional<std::uint32_t> sid, std::uint32_t next_count) {
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    Block b = mine_genesis(g_, anchors, known, params_, oracle_, now_, {"gen" + std::to_string(tag_++)});
    if (!sid || chain_hash(b, g_.hasher()).mod(next_count) == *sid) return commit(std::move(b));
  }
  throw std::runtime_error("no genesis for the requested sub-chain");
}

Fig1Fixture make_fig1() {
  Fig1Fixture f;
  GraphBuilder& b = f.builder;
  f.g0 = b.g0();
  f.b1 = b.mine_on(f.g0);
  f.c2 = b.mine_on(f.b1);
  f.G = b.genesis({f.b1}, {});
  f.x3 = b.mine_on(f.G);
  f.y4 = b.mine_on(f.x3);
  f.h0 = b.genesis({f.x3}, {}, 0, 2);
  f.h1 = b.genesis({f.x3}, {f.h0}, 1, 2);
  f.z0 = b.mine_for_chain(Snapshot{{f.h0, f.h1}}, 0);
  f.z1 = b.mine_for_chain(Snapshot{{f.z0, f.h1}}, 1);
  return f;
}

VoteBench::VoteBench(std::uint32_t n, const ProtocolParams& p) : g(make_initial_genesis(p)) {
  const Digest g0 = g.genesis_root();
  // Hand-built blocks still map to their sub-chain through the chain hash.
  auto insert_on = [&](Block b, std::uint32_t sid) {
    while (chain_hash(b, g.hasher()).mod(n) != sid) ++b.nonce;
    return g.insert(std::move(b));
  };
  std::vector<Digest> filler;
  for (int i = 0; i < 4; ++i) {
    Block b;
    b.guider = g0;
    b.parent = g0;
    b.clock = 1;
    b.number = 1;
    b.payload = {"filler" + std::to_string(i)};
    filler.push_back(g.insert(b));
  }
  ViewInfo info;
  info.anchors = {g0};
  info.number = 2;
  info.chain_count = n;
  info.parent = 0;
  view.view_index = g.register_view(info);
  view.view_number = 2;
  view.anchors = {g0};
  view.chain_count = n;
  Digest prev = g0;
  for (std::uint32_t i = 0; i < n; ++i) {
    Block gen;
    gen.guider = prev;
    gen.clock = i + 1;
    if (i == 0) gen.anchors = {g0};
    gen.payload = {"gen" + std::to_string(i)};
    prev = insert_on(gen, i);
    view.geneses.push_back(prev);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    std::array<Digest, 4> tips;
    const std::size_t counts[3] = {2, 4, 0};
    for (int k = 0; k < 3; ++k) {
      Block x;
      x.guider = view.geneses.back();
      x.parent = view.geneses[i];
      x.clock = n + 1;
      x.number = 1;
      x.samples.assign(filler.begin(), filler.begin() + static_cast<std::ptrdiff_t>(counts[k]));
      x.payload = {"x" + std::to_string(i) + "_" + std::to_string(k)};
      tips[static_cast<std::size_t>(k)] = insert_on(x, i);
    }
    tips[3] = view.geneses[i];
    choice.push_back(tips);
  }
}

BlockGraph random_single_chain(std::uint64_t seed, std::size_t blocks, std::size_t window) {
  std::mt19937_64 rng(seed);
  GraphBuilder b(single_view_params(), seed, Timestamp(0));
  std::uniform_int_distribution<std::int64_t> gap(200'000, 3'000'000);
  std::vector<Digest> inserted{b.g0()};
  for (std::size_t i = 1; i < blocks; ++i) {
    const std::size_t lo = inserted.size() > window ? inserted.size() - window : 0;
    std::uniform_int_distribution<std::size_t> pick(lo, inserted.size() - 1);
    b.advance(Timestamp(gap(rng)));
    inserted.push_back(b.mine_on(inserted[pick(rng)], {"t" + std::to_string(i)}));
  }
  return std::move(b.graph());
}

sim::ScenarioConfig small_view_change_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  sim::ScenarioConfig c;
  c.seed = seed;
  c.duration = 30;
  c.block_rate = 2;
  c.protocol.epoch_length = static_cast<std::uint64_t>(pick(2, 4));
  c.protocol.min_clock_gap = 1;
  c.protocol.delay_multiplier = 1;
  c.protocol.reference_rate = Rational(pick(1, 3), 2);
  c.network.base_delay = Rational(1, 20);
  c.network.jitter = Rational(pick(1, 9), 10);
  const int nodes = pick(2, 4);
  c.nodes.assign(static_cast<std::size_t>(nodes), sim::NodeConfig{Rational(1, nodes)});
  return c;
}

BlockGraph simulated_graph(const sim::ScenarioConfig& config, std::uint64_t seed) {
  sim::Simulator s(config, seed);
  s.run();
  return s.nodes().front().local_graph;
}

std::size_t main_view_changes(const BlockGraph& g) { return order_graph(g, params_of(g)).segments.size() - 1; }

std::optional<BlockGraph> random_multiview(std::uint64_t seed, std::size_t max_blocks, std::size_t min_changes,
                                           std::size_t max_changes, int attempts) {
  for (int a = 0; a < attempts; ++a) {
    const std::uint64_t s = seed * 1000 + static_cast<std::uint64_t>(a);
    sim::ScenarioConfig c = small_view_change_scenario(s);
    c.duration = Rational(static_cast<std::int64_t>(max_blocks) * 2, 5);
    BlockGraph g = simulated_graph(c, s);
    if (g.size() > max_blocks) continue;
    const std::size_t changes = main_view_changes(g);
    if (changes >= min_changes && changes <= max_changes) return g;
  }
  return std::nullopt;
}

std::vector<Digest> random_topological_order(const BlockGraph& g, std::mt19937_64& rng) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> dependents(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Block& b = g.record_at(i).block;
    std::vector<Digest> refs = b.samples;
    refs.insert(refs.end(), b.anchors.begin(), b.anchors.end());
    if (b.guider) refs.push_back(*b.guider);
    if (b.parent) refs.push_back(*b.parent);
    std::sort(refs.begin(), refs.end());
    refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
    for (const auto& r : refs) {
      dependents[g.record(r).index].push_back(i);
      ++pending[i];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.push_back(i);
  }
  std::vector<Digest> order;
  while (!ready.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
    const std::size_t k = pick(rng);
    const std::size_t i = ready[k];
    ready[k] = ready.back();
    ready.pop_back();
    order.push_back(g.record_at(i).id);
    for (std::size_t d : dependents[i]) {
      if (--pending[d] == 0) ready.push_back(d);
    }
  }
  return order;
}

BlockGraph replay(const BlockGraph& g, const std::vector<Digest>& order) {
  const ProtocolParams params = params_of(g);
  BlockGraph out(g.block(g.genesis_root()), g.hasher_ptr());
  for (const auto& id : order) {
    if (id == g.genesis_root()) continue;
    const AcceptOutcome r = accept_block(out, g.block(id), params, SampleCheck::Relaxed);
    if (!r.inserted) {
      const std::string why = r.verdict ? "duplicate" : std::string(to_string(*r.verdict.reason)) + " " + r.verdict.detail;
      throw std::runtime_error("replay rejected " + id.short_hex() + ": " + why);
    }
  }
  return out;
}

}  // namespace balloon::testing
