#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace balloon {

enum class ErrorCode {
  UnresolvedReference,
  EmptySnapshot,
  SidOutOfRange,
  OracleExhausted,
  EmptyEpoch,
  EmptyRates,
  InconsistentTips,
  NotOnMainChain,
  MalformedBlock,
  MalformedDump,
  InvalidParams,
  InvalidScenario,
  InvalidGraph,
};

std::string_view to_string(ErrorCode code);

/// Every operation in the library reports failure through this exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace balloon
