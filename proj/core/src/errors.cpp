#include "balloon/errors.hpp"

namespace balloon {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::EmptySnapshot: return "EmptySnapshot";
    case ErrorCode::SidOutOfRange: return "SidOutOfRange";
    case ErrorCode::OracleExhausted: return "OracleExhausted";
    case ErrorCode::EmptyEpoch: return "EmptyEpoch";
    case ErrorCode::EmptyRates: return "EmptyRates";
    case ErrorCode::InconsistentTips: return "InconsistentTips";
    case ErrorCode::NotOnMainChain: return "NotOnMainChain";
    case ErrorCode::MalformedBlock: return "MalformedBlock";
    case ErrorCode::MalformedDump: return "MalformedDump";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
  }
  return "Unknown";
}

}  // namespace balloon
