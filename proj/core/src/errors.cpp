#include "dqmem/errors.hpp"

namespace dqmem {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveVolume: return "NonPositiveVolume";
    case ErrorCode::ZeroModeCount: return "ZeroModeCount";
    case ErrorCode::NonPositiveMomentum: return "NonPositiveMomentum";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::NegativeDamping: return "NegativeDamping";
    case ErrorCode::NegativeOccupation: return "NegativeOccupation";
    case ErrorCode::NegativeSqueeze: return "NegativeSqueeze";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorCode::ZeroDampingFiniteLifetime: return "ZeroDampingFiniteLifetime";
    case ErrorCode::NonPositiveStep: return "NonPositiveStep";
    case ErrorCode::NonPositiveHorizon: return "NonPositiveHorizon";
    case ErrorCode::NonPositiveTimeStep: return "NonPositiveTimeStep";
    case ErrorCode::RefreshForgotten: return "RefreshForgotten";
    case ErrorCode::ClockRegression: return "ClockRegression";
    case ErrorCode::UnknownCode: return "UnknownCode";
    case ErrorCode::DuplicateCode: return "DuplicateCode";
    case ErrorCode::StartForgotten: return "StartForgotten";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace dqmem
