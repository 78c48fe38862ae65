#include "balloon/mining.hpp"

#include <algorithm>

#include "balloon/errors.hpp"
#include "balloon/merkle.hpp"
#include "balloon/sampling.hpp"

namespace balloon {

bool pow_valid(const Digest& chain_hash, const Rational& diff_required) {
  // 2^64 / (p + 1) >= num / den  <=>  2^64 * den >= (p + 1) * num
  const uint128 lhs = (static_cast<uint128>(1) << 64) *
                                static_cast<uint128>(diff_required.den());
  const uint128 rhs = (static_cast<uint128>(chain_hash.prefix64()) + 1) *
                                static_cast<uint128>(diff_required.num());
  return lhs >= rhs;
}

bool pow_valid(const Block& b, const Rational& diff_required, const Hasher& hasher) {
  return pow_valid(chain_hash(b, hasher), diff_required);
}

std::uint32_t assign_chain(const Digest& h_c, std::uint32_t n_v) {
  if (n_v == 0) throw Error(ErrorCode::InvalidParams, "sub-chain count must be positive");
  return static_cast<std::uint32_t>(h_c.mod(n_v));
}

PowOracle PowOracle::grind(std::uint64_t budget) { return PowOracle(Mode::Grind, 0, budget); }

PowOracle PowOracle::simulated(std::uint64_t seed, std::uint64_t budget) {
  return PowOracle(Mode::Simulated, seed, budget);
}

void PowOracle::solve(Block& b, const ProtocolParams& params, const Hasher& hasher) {
  for (std::uint64_t tries = 0; tries < budget_; ++tries) {
    b.nonce = counter_++;
    if (pow_valid(b, params.diff_required, hasher)) return;
  }
  throw Error(ErrorCode::OracleExhausted, "no nonce found within " + std::to_string(budget_) + " attempts");
}

Timestamp PowOracle::next_success(double rate) {
  if (!(rate > 0)) return Timestamp::max();
  std::exponential_distribution<double> wait(rate);
  const double seconds = wait(rng_);
  return Timestamp(static_cast<std::int64_t>(seconds * 1e6) + 1);
}

Digest pick_guider(const BlockGraph& g, std::span<const Digest> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::EmptySnapshot, "no guider candidates");
  Digest best = candidates.front();
  std::uint64_t best_clock = g.block(best).clock;
  for (const auto& c : candidates.subspan(1)) {
    const std::uint64_t clock = g.block(c).clock;
    if (clock > best_clock || (clock == best_clock && c < best)) {
      best = c;
      best_clock = clock;
    }
  }
  return best;
}

Block mine_block(const BlockGraph& g, const Snapshot& snapshot, const ProtocolParams& params, PowOracle& oracle,
                 Timestamp now, std::vector<std::string> payload) {
  if (snapshot.blocks.empty()) throw Error(ErrorCode::EmptySnapshot, "cannot mine without a snapshot");
  const Hasher& hasher = g.hasher();
  Block b;
  b.root = merkle_root(snapshot.blocks, hasher);
  b.guider = pick_guider(g, snapshot.blocks);
  b.clock = g.block(*b.guider).clock + 1;
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

}  // namespace balloon
