#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topo {

enum class ErrorCode {
  SingularMatrix,
  NoConvergence,
  InvalidModel,
  ParseError,
  AmbiguousSignature,
  NotPerfectlyConducting,
  MoebiusUndefined,
  StereoUndefined,
  NotLagrangian,
  ResolventSingular,
  NoSpectralSplit,
  CayleyUndefined,
  NotInvertible,
  InvalidGap,
  GapViolated,
  RefineGrid,
  Unconverged,
  ReflectionUndefined,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the engine is reported through this type. `value` carries
/// the diagnostic number attached to the failure (condition estimate, residual,
/// smallest singular value, offending phase increment, ...), NaN if none.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double value = kNoValue)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

  static constexpr double kNoValue = __builtin_nan("");

 private:
  ErrorCode code_;
  double value_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AmbiguousSignature: return "AmbiguousSignature";
    case ErrorCode::NotPerfectlyConducting: return "NotPerfectlyConducting";
    case ErrorCode::MoebiusUndefined: return "MoebiusUndefined";
    case ErrorCode::StereoUndefined: return "StereoUndefined";
    case ErrorCode::NotLagrangian: return "NotLagrangian";
    case ErrorCode::ResolventSingular: return "ResolventSingular";
    case ErrorCode::NoSpectralSplit: return "NoSpectralSplit";
    case ErrorCode::CayleyUndefined: return "CayleyUndefined";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::InvalidGap: return "InvalidGap";
    case ErrorCode::GapViolated: return "GapViolated";
    case ErrorCode::RefineGrid: return "RefineGrid";
    case ErrorCode::Unconverged: return "Unconverged";
    case ErrorCode::ReflectionUndefined: return "ReflectionUndefined";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace topo
