#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dqmem {

enum class ErrorCode {
  NonPositiveVolume,
  ZeroModeCount,
  NonPositiveMomentum,
  NegativeTime,
  NonPositiveFrequency,
  InvalidSchedule,
  NegativeDamping,
  NegativeOccupation,
  NegativeSqueeze,
  GridMismatch,
  NonPositiveBeta,
  ZeroDampingFiniteLifetime,
  NonPositiveStep,
  NonPositiveHorizon,
  NonPositiveTimeStep,
  RefreshForgotten,
  ClockRegression,
  UnknownCode,
  DuplicateCode,
  StartForgotten,
  InvalidThreshold,
  TruncationTooSmall,
  ParseError,
  ValidationError,
  UnknownKey,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dqmem
