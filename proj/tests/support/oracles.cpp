#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "balloon/block.hpp"

namespace balloon::testing {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

std::map<Digest, std::vector<Digest>> parent_edges(const BlockGraph& g) {
  std::map<Digest, std::vector<Digest>> children;
  for (const auto& id : g.insertion_order()) {
    const Block& b = g.block(id);
    if (b.parent) children[*b.parent].push_back(id);
  }
  return children;
}

// Anchor set a genesis belongs to, following genesis guiders.
std::set<Digest> genesis_anchors(const BlockGraph& g, const Digest& genesis) {
  Digest cur = genesis;
  while (true) {
    const Block& b = g.block(cur);
    if (!b.anchors.empty()) return {b.anchors.begin(), b.anchors.end()};
    if (!b.guider || b.is_initial_genesis()) return {};
    const Block& guider = g.block(*b.guider);
    if (!guider.is_genesis() || guider.is_initial_genesis()) return {};
    cur = *b.guider;
  }
}

cpp_rational to_big(const Rational& r) { return cpp_rational(cpp_int(r.num()), cpp_int(r.den())); }

cpp_int ceil_div(const cpp_rational& r) {
  const cpp_int p = boost::multiprecision::numerator(r);
  const cpp_int q = boost::multiprecision::denominator(r);
  cpp_int quotient = p / q;
  if (quotient * q < p) ++quotient;
  return quotient;
}

}  // namespace

std::vector<Digest> ghost_main_chain(const BlockGraph& g) {
  const auto children = parent_edges(g);
  std::map<Digest, Rational> weight;
  const auto order = g.insertion_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Rational w = g.block(*it).weight;
    if (auto c = children.find(*it); c != children.end()) {
      for (const auto& child : c->second) w += weight.at(child);
    }
    weight[*it] = w;
  }
  std::vector<Digest> chain{g.genesis_root()};
  while (true) {
    auto c = children.find(chain.back());
    if (c == children.end()) break;
    Digest best = c->second.front();
    for (const auto& child : c->second) {
      if (weight[child] > weight[best] || (weight[child] == weight[best] && child < best)) best = child;
    }
    chain.push_back(best);
  }
  return chain;
}

std::set<Digest> brute_offspring(const BlockGraph& g, const Digest& b) {
  const auto children = parent_edges(g);
  std::set<Digest> out{b};
  std::deque<Digest> todo{b};
  while (!todo.empty()) {
    const Digest cur = todo.front();
    todo.pop_front();
    auto c = children.find(cur);
    if (c == children.end()) continue;
    for (const auto& child : c->second) {
      if (out.insert(child).second) todo.push_back(child);
    }
  }
  return out;
}

std::set<Digest> brute_subtree_blocks(const BlockGraph& g, const Digest& b) {
  std::vector<Digest> geneses;
  std::set<Digest> referenced;
  std::map<Digest, std::set<Digest>> anchors_by_genesis;
  for (const auto& id : g.insertion_order()) {
    const Block& blk = g.block(id);
    if (!blk.is_genesis() || blk.is_initial_genesis()) continue;
    geneses.push_back(id);
    anchors_by_genesis[id] = genesis_anchors(g, id);
    referenced.insert(anchors_by_genesis[id].begin(), anchors_by_genesis[id].end());
  }

  std::function<std::set<Digest>(const Digest&)> successors = [&](const Digest& base) {
    const std::set<Digest> offspring = brute_offspring(g, base);
    std::set<Digest> reformers;
    for (const auto& x : offspring) {
      if (referenced.contains(x)) reformers.insert(x);
    }
    std::set<Digest> out;
    for (const auto& gen : geneses) {
      const auto& anchors = anchors_by_genesis[gen];
      const bool changer = std::any_of(anchors.begin(), anchors.end(), [&](const Digest& a) { return reformers.contains(a); });
      if (!changer) continue;
      const auto off = brute_offspring(g, gen);
      out.insert(off.begin(), off.end());
      const auto next = successors(gen);
      out.insert(next.begin(), next.end());
    }
    return out;
  };

  std::set<Digest> result = brute_offspring(g, b);
  const std::uint32_t n = g.view(g.record(b).view).chain_count;
  const std::uint64_t sid = bigint_mod(chain_hash(g.block(b), g.hasher()), n);
  for (const auto& s : successors(b)) {
    if (bigint_mod(chain_hash(g.block(s), g.hasher()), n) == sid) result.insert(s);
  }
  return result;
}

Rational brute_subtree_weight(const BlockGraph& g, const Digest& b) {
  Rational total;
  for (const auto& x : brute_subtree_blocks(g, b)) total += g.block(x).weight;
  return total;
}

std::uint64_t guider_depth(const BlockGraph& g, const Digest& b) {
  std::uint64_t depth = 0;
  for (const Block* cur = &g.block(b); cur->guider; cur = &g.block(*cur->guider)) ++depth;
  return depth;
}

std::uint64_t bigint_mod(const Digest& d, std::uint64_t n) {
  cpp_int v = 0;
  for (auto byte : d.bytes) v = v * 256 + byte;
  return static_cast<std::uint64_t>(v % n);
}

std::uint32_t direct_next_count(std::uint32_t n_v, const std::vector<Rational>& rates, bool vote_up,
                                const Rational& r0, const Rational& alpha1) {
  const cpp_rational big_r0 = to_big(r0);
  cpp_rational factor;
  if (vote_up) {
    factor = to_big(*std::max_element(rates.begin(), rates.end())) / big_r0;
  } else {
    cpp_rational r_m = -1;
    for (const auto& r : rates) {
      if (r < r0) r_m = std::max(r_m, to_big(r));
    }
    factor = std::max<cpp_rational>(r_m / big_r0, cpp_rational(1) - to_big(alpha1));
  }
  const cpp_int next = ceil_div(cpp_rational(n_v) * factor);
  return next < 1 ? 1u : static_cast<std::uint32_t>(next);
}

Digest naive_merkle_root(std::vector<Digest> leaves, const Hasher& hasher) {
  std::vector<Digest> layer;
  for (const auto& leaf : leaves) {
    std::vector<std::uint8_t> buf{0x00};
    buf.insert(buf.end(), leaf.bytes.begin(), leaf.bytes.end());
    layer.push_back(hasher.hash(buf));
  }
  while (layer.size() > 1) {
    if (layer.size() % 2 == 1) layer.push_back(layer.back());
    std::vector<Digest> next;
    for (std::size_t i = 0; i < layer.size(); i += 2) {
      std::vector<std::uint8_t> buf{0x01};
      buf.insert(buf.end(), layer[i].bytes.begin(), layer[i].bytes.end());
      buf.insert(buf.end(), layer[i + 1].bytes.begin(), layer[i + 1].bytes.end());
      next.push_back(hasher.hash(buf));
    }
    layer = std::move(next);
  }
  return layer.front();
}

std::vector<std::string> first_occurrence_dedup(const OrderedChain& c, const BlockGraph& g) {
  std::vector<std::string> out;
  for (const auto& id : c.blocks) {
    const Block& b = g.block(id);
    if (b.is_initial_genesis()) continue;
    for (const auto& tx : b.payload) {
      if (std::find(out.begin(), out.end(), tx) == out.end()) out.push_back(tx);
    }
  }
  return out;
}

}  // namespace balloon::testing
