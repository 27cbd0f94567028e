#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace beltway {

enum class ErrorKind {
  InvalidArgument,
  InvalidSignal,
  DimensionError,
  DimensionMismatch,
  NotPSD,
  RankExceeded,
  PreconditionError,
  NoRealSolution,
  DegeneratePartner,
  NotCollisionFree,
  NotRadiallyCollisionFree,
  InconsistentWeights,
  InconsistentInvariants,
  WeightProductsNotDistinct,
  BudgetExceeded,
  ScaleError,
  DegenerateParameters,
  ConfigError,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// Domain failure raised by every library operation; `kind()` lets callers
// branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidSignal: return "InvalidSignal";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::RankExceeded: return "RankExceeded";
    case ErrorKind::PreconditionError: return "PreconditionError";
    case ErrorKind::NoRealSolution: return "NoRealSolution";
    case ErrorKind::DegeneratePartner: return "DegeneratePartner";
    case ErrorKind::NotCollisionFree: return "NotCollisionFree";
    case ErrorKind::NotRadiallyCollisionFree: return "NotRadiallyCollisionFree";
    case ErrorKind::InconsistentWeights: return "InconsistentWeights";
    case ErrorKind::InconsistentInvariants: return "InconsistentInvariants";
    case ErrorKind::WeightProductsNotDistinct: return "WeightProductsNotDistinct";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ScaleError: return "ScaleError";
    case ErrorKind::DegenerateParameters: return "DegenerateParameters";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace beltway
