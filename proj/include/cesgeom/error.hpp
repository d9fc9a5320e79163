#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cesgeom {

enum class ErrorCode {
  NotHermitian,
  NotPositiveDefinite,
  ConvergenceFailure,
  DomainError,
  DimensionMismatch,
  InvalidMetricParams,
  LeftCone,
  InsufficientSamples,
  NoConvergence,
  InvalidArgument,
  NumericalRankLoss,
  SingularFim,
  EmptyClass,
  ParseError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidMetricParams: return "InvalidMetricParams";
    case ErrorCode::LeftCone: return "LeftCone";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NumericalRankLoss: return "NumericalRankLoss";
    case ErrorCode::SingularFim: return "SingularFim";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

inline void require_same_dim(int a, int b, std::string_view what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " (" + std::to_string(a) + " vs " +
                    std::to_string(b) + ")");
  }
}

}  // namespace cesgeom
