#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "balloon/graph.hpp"
#include "balloon/mining.hpp"
#include "balloon/params.hpp"

namespace balloon {

enum class Ballot : std::uint8_t { Abstain, NoChange, RateHigh, RateLow };

std::string_view to_string(Ballot b);

struct VoteTally {
  std::uint32_t no_change = 0;
  std::uint32_t rate_high = 0;
  std::uint32_t rate_low = 0;
  friend bool operator==(const VoteTally&, const VoteTally&) = default;
};

/// More than half of n, evaluated exactly.
constexpr bool strict_majority(std::uint32_t votes, std::uint32_t n) { return 2 * std::uint64_t{votes} > n; }

struct ChangeDecision {
  enum class Kind { NoChange, Change };

  Kind kind = Kind::NoChange;
  std::vector<Digest> anchors;           ///< one per sub-chain, by sub-chain id
  std::vector<Rational> deviant_rates;   ///< R, in sub-chain order
  bool vote_up = false;
  std::uint64_t epoch = 0;
  /// Evaluation stopped at an epoch some sub-chain has not finished yet.
  bool pending = false;

  bool is_change() const { return kind == Kind::Change; }
  friend bool operator==(const ChangeDecision&, const ChangeDecision&) = default;
};

/// Inclusive clock range of an epoch for one sub-chain.
struct EpochWindow {
  std::uint64_t epoch = 1;
  std::uint64_t c_s = 0;
  std::uint64_t c_t = 0;
  friend bool operator==(const EpochWindow&, const EpochWindow&) = default;
};

/// Epoch 1 starts at the sub-chain's own genesis clock; every epoch ends at
/// c_g + epoch * epoch_length - 1 with c_g the largest genesis clock.
EpochWindow epoch_window(std::uint64_t epoch, std::span<const std::uint64_t> genesis_clocks, std::uint32_t chain,
                         std::uint64_t epoch_length);
EpochWindow epoch_window(const BlockGraph& g, std::uint64_t epoch, const ViewDescriptor& view, std::uint32_t chain,
                         const ProtocolParams& params);

/// Per-epoch voting state. Ballots are cast sub-chain by sub-chain; cast()
/// returns false once no-change holds a strict majority and the remaining
/// sub-chains are not consulted.
class EpochVote {
 public:
  EpochVote(const BlockGraph& g, std::uint64_t epoch, std::uint32_t n_v, const ProtocolParams& params);

  /// B_s of the next sub-chain. An empty set abstains and contributes no anchor.
  bool cast(std::span<const Digest> block_set);
  ChangeDecision finish() const;

  std::uint64_t epoch() const { return epoch_; }
  const VoteTally& tally() const { return tally_; }
  const std::vector<Ballot>& ballots() const { return ballots_; }
  const std::vector<std::optional<Rational>>& rates() const { return rates_; }
  const std::vector<std::optional<Digest>>& potential_anchors() const { return potential_anchors_; }

 private:
  const BlockGraph* g_;
  const ProtocolParams* params_;
  std::uint64_t epoch_;
  std::uint32_t n_v_;
  VoteTally tally_;
  std::vector<Ballot> ballots_;
  std::vector<std::optional<Rational>> rates_;
  std::vector<std::optional<Digest>> potential_anchors_;
  std::vector<Digest> anchors_;
  std::vector<Rational> deviant_;
};

/// Tally for a whole epoch given every sub-chain's B_s.
struct EpochOutcome {
  std::uint64_t epoch = 1;
  std::vector<Ballot> ballots;
  std::vector<std::optional<Rational>> rates;
  std::vector<std::optional<Digest>> potential_anchors;
  VoteTally tally;
  ChangeDecision decision;
};
EpochOutcome tally_epoch(const BlockGraph& g, std::uint64_t epoch, const std::vector<std::vector<Digest>>& block_sets,
                         const ProtocolParams& params);

/// Runs the epoch vote from epoch 1 over the parent-ancestry of each tip and
/// returns the first change, or NoChange with pending set once an incomplete
/// epoch is reached. Throws Error(InconsistentTips) when a tip does not
/// descend from the view's genesis for its sub-chain.
ChangeDecision detect_view_change(const BlockGraph& g, const ViewDescriptor& view, const Snapshot& tips,
                                  const ProtocolParams& params);

/// Sub-chain count of the next view. Throws Error(EmptyRates).
std::uint32_t next_chain_count(std::uint32_t n_v, std::span<const Rational> rates, bool vote_up,
                               const ProtocolParams& params);

/// Builds and solves a genesis for the view opened by `anchors`. Without
/// known geneses of that view the block carries the anchors and follows the
/// latest anchor; otherwise it carries no anchors and follows the latest known
/// genesis.
Block mine_genesis(const BlockGraph& g, std::span<const Digest> anchors, std::span<const Digest> known_geneses,
                   const ProtocolParams& params, PowOracle& oracle, Timestamp now,
                   std::vector<std::string> payload = {});

/// Re-derives the view a first-of-view genesis with these anchors opens: the
/// anchors must be the potential anchors of one epoch of a single view, one
/// per sub-chain, and that epoch's vote must call for a change.
struct ViewResolution {
  std::optional<ViewInfo> view;
  std::string reason;  ///< why resolution failed
};
ViewResolution resolve_view_change(const BlockGraph& g, std::span<const Digest> anchors,
                                   const ProtocolParams& params);

}  // namespace balloon
