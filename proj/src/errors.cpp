#include "repose/errors.hpp"

namespace repose {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NonUnitAxis: return "NonUnitAxis";
    case ErrorCode::InvalidSpacing: return "InvalidSpacing";
    case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::DegenerateGrasp: return "DegenerateGrasp";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::UnresolvedSelector: return "UnresolvedSelector";
    case ErrorCode::CacheMismatch: return "CacheMismatch";
    case ErrorCode::InvalidEdge: return "InvalidEdge";
    case ErrorCode::DroopConditionViolated: return "DroopConditionViolated";
    case ErrorCode::ContactLost: return "ContactLost";
    case ErrorCode::ReachExceeded: return "ReachExceeded";
    case ErrorCode::CollisionInTransit: return "CollisionInTransit";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
  }
  return "UnknownError";
}

}  // namespace repose
