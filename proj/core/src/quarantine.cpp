#include "balloon/quarantine.hpp"

#include <algorithm>
#include <deque>

namespace balloon {

bool Quarantine::hold(const Digest& id, Block b, std::span<const Digest> missing) {
  if (!held_.emplace(id, std::move(b)).second) return false;
  for (const auto& m : missing) waiting_[m].push_back(id);
  return true;
}

std::vector<Block> Quarantine::release(const Digest& arrived, const BlockGraph& g) {
  std::vector<Block> ready;
  auto it = waiting_.find(arrived);
  if (it == waiting_.end()) return ready;
  std::vector<Digest> ids = std::move(it->second);
  waiting_.erase(it);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const auto& id : ids) {
    auto h = held_.find(id);
    if (h == held_.end()) continue;
    const auto missing = g.missing_references(h->second);
    if (!missing.empty()) {
      // Still blocked; it is already registered under every reference it lacks.
      continue;
    }
    ready.push_back(std::move(h->second));
    held_.erase(h);
  }
  return ready;
}

IngestReport ingest(BlockGraph& g, Quarantine& q, Block b, const ProtocolParams& params, SampleCheck mode) {
  IngestReport report;
  canonicalize(b);
  const Digest id = block_id(b, g.hasher());
  if (g.contains(id) || q.contains(id)) return report;
  if (auto missing = g.missing_references(b); !missing.empty()) {
    report.held = q.hold(id, std::move(b), missing);
    return report;
  }
  std::deque<Block> queue;
  queue.push_back(std::move(b));
  while (!queue.empty()) {
    Block next = std::move(queue.front());
    queue.pop_front();
    auto outcome = accept_block(g, std::move(next), params, mode);
    if (!outcome.inserted) {
      if (!outcome.verdict) report.rejected.emplace_back(outcome.id, outcome.verdict);
      continue;
    }
    report.accepted.push_back(outcome.id);
    for (auto& r : q.release(outcome.id, g)) queue.push_back(std::move(r));
  }
  return report;
}

}  // namespace balloon
