#include "balloon/params.hpp"

#include <charconv>
#include <map>

#include "balloon/errors.hpp"

namespace balloon {
namespace {

constexpr std::string_view kTag = "balloon.params/1";

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidParams, "bad integer for " + key + ": '" + text + "'");
  }
  return v;
}

Rational to_rational(const std::string& key, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidParams, "bad rational for " + key + ": " + e.what());
  }
}

}  // namespace

void ProtocolParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidParams, what);
  };
  require(diff_required > 0, "diff_required must be positive");
  require(reference_rate > 0, "reference_rate must be positive");
  require(vote_threshold > 0 && vote_threshold < 1, "vote_threshold must lie in (0,1)");
  require(max_downscale > 0 && max_downscale < 1, "max_downscale must lie in (0,1)");
  require(epoch_length > 0, "epoch_length must be positive");
  require(min_clock_gap > 0, "min_clock_gap must be positive");
  require(delay_multiplier > 0, "delay_multiplier must be positive");
  require(delay_bound > 0, "delay_bound must be positive");
  require(sample_cap > 0, "sample_cap must be positive");
  require(confirm_margin > 0, "confirm_margin must be positive");
}

std::vector<std::string> encode_params(const ProtocolParams& p) {
  return {
      std::string(kTag),
      "diff_required=" + p.diff_required.to_string(),
      "reference_rate=" + p.reference_rate.to_string(),
      "vote_threshold=" + p.vote_threshold.to_string(),
      "max_downscale=" + p.max_downscale.to_string(),
      "epoch_length=" + std::to_string(p.epoch_length),
      "min_clock_gap=" + std::to_string(p.min_clock_gap),
      "delay_multiplier=" + std::to_string(p.delay_multiplier),
      "delay_bound=" + p.delay_bound.to_string(),
      "sample_cap=" + std::to_string(p.sample_cap),
      "confirm_margin=" + p.confirm_margin.to_string(),
  };
}

ProtocolParams decode_params(const std::vector<std::string>& payload) {
  if (payload.empty() || payload.front() != kTag) {
    throw Error(ErrorCode::InvalidParams, "initial genesis payload does not carry protocol parameters");
  }
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < payload.size(); ++i) {
    const auto eq = payload[i].find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidParams, "bad parameter entry '" + payload[i] + "'");
    kv[payload[i].substr(0, eq)] = payload[i].substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorCode::InvalidParams, "missing parameter " + key);
    return it->second;
  };

  ProtocolParams p;
  p.diff_required = to_rational("diff_required", get("diff_required"));
  p.reference_rate = to_rational("reference_rate", get("reference_rate"));
  p.vote_threshold = to_rational("vote_threshold", get("vote_threshold"));
  p.max_downscale = to_rational("max_downscale", get("max_downscale"));
  p.epoch_length = to_u64("epoch_length", get("epoch_length"));
  p.min_clock_gap = to_u64("min_clock_gap", get("min_clock_gap"));
  p.delay_multiplier = to_u64("delay_multiplier", get("delay_multiplier"));
  p.delay_bound = to_rational("delay_bound", get("delay_bound"));
  p.sample_cap = to_u64("sample_cap", get("sample_cap"));
  p.confirm_margin = to_rational("confirm_margin", get("confirm_margin"));
  p.validate();
  return p;
}

}  // namespace balloon
