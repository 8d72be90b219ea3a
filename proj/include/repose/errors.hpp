#pragma once

#include <stdexcept>
#include <string>

namespace repose {

enum class ErrorCode {
  ParseError,
  ValidationError,
  IoError,
  NonUnitAxis,
  InvalidSpacing,
  StepOutOfRange,
  AngleOutOfRange,
  DegenerateGrasp,
  NoPath,
  UnresolvedSelector,
  CacheMismatch,
  InvalidEdge,
  DroopConditionViolated,
  ContactLost,
  ReachExceeded,
  CollisionInTransit,
  VerificationFailed,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a structured error code; the CLI maps codes to
/// exit statuses, library callers can switch on them.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace repose
