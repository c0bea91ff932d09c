#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mnemosim {

enum class ErrorCode {
  UnknownProposition,
  UnknownContext,
  UnknownBranch,
  EmptyTrace,
  InvalidTrace,
  NotLasso,
  StepOutOfRange,
  TimeBeforeCurveStart,
  NotDecayed,
  NonMonotoneTime,
  PathExplosion,
  NotContained,
  NonPositiveInput,
  NegativeTime,
  UnresolvedLatency,
  NonPositiveLatency,
  NoIncomingInfluence,
  Divergence,
  ZeroTotalInfluence,
  UnassignedChain,
  OutOfRange,
  ZeroEvidence,
  ZeroMarginal,
  EmptyContext,
  ZeroPosterior,
  InvalidDistribution,
  NegativeEntropy,
  EmptyChain,
  InsufficientData,
  ValidationFailed,
  EventHorizonExceeded,
  ClockRegression,
  ParseError,
  MissingAnchor,
};

std::string_view to_string(ErrorCode code);

/// Domain error carrying a machine-checkable code. Every fallible
/// operation in the library throws this type and nothing else.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mnemosim
