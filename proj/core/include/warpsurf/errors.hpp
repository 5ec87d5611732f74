#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warpsurf {

enum class ErrorCode {
  DomainError,
  OutOfDomain,
  DegenerateJet,
  OrientationAmbiguous,
  DivByZeroD,
  NotPositivelyCurved,
  QuadratureFail,
  NotConstantKe,
  NotConstantH,
  NotMinimal,
  BadScale,
  BadInput,
  SlopeVanishes,
  AffinityBroken,
  StepFailure,
};

constexpr std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegenerateJet: return "DegenerateJet";
    case ErrorCode::OrientationAmbiguous: return "OrientationAmbiguous";
    case ErrorCode::DivByZeroD: return "DivByZeroD";
    case ErrorCode::NotPositivelyCurved: return "NotPositivelyCurved";
    case ErrorCode::QuadratureFail: return "QuadratureFail";
    case ErrorCode::NotConstantKe: return "NotConstantKe";
    case ErrorCode::NotConstantH: return "NotConstantH";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::BadScale: return "BadScale";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::SlopeVanishes: return "SlopeVanishes";
    case ErrorCode::AffinityBroken: return "AffinityBroken";
    case ErrorCode::StepFailure: return "StepFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto exit codes and reports.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw GeometryError(code, what);
}

}  // namespace warpsurf
