#pragma once

#include <map>
#include <span>
#include <vector>

#include "balloon/graph.hpp"
#include "balloon/validation.hpp"

namespace balloon {

/// Blocks received before some of their references. Each is released once the
/// last missing reference has entered the graph.
class Quarantine {
 public:
  /// Returns false when the block is already held.
  bool hold(const Digest& id, Block b, std::span<const Digest> missing);
  /// Held blocks that became complete now that `arrived` is in g, by digest.
  std::vector<Block> release(const Digest& arrived, const BlockGraph& g);

  bool contains(const Digest& id) const { return held_.contains(id); }
  std::size_t size() const { return held_.size(); }

 private:
  std::map<Digest, Block> held_;
  std::map<Digest, std::vector<Digest>> waiting_;  // missing reference -> held ids
};

struct IngestReport {
  std::vector<Digest> accepted;  ///< in insertion order, including released blocks
  std::vector<std::pair<Digest, ValidationVerdict>> rejected;
  bool held = false;  ///< the offered block went into quarantine
};

/// Accepts b if its references are present, otherwise quarantines it, then
/// flushes everything the new blocks unblock.
IngestReport ingest(BlockGraph& g, Quarantine& q, Block b, const ProtocolParams& params,
                    SampleCheck mode = SampleCheck::Relaxed);

}  // namespace balloon
