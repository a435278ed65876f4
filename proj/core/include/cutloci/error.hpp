#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cutloci {

enum class ErrorCode {
  // matfun
  NotHermitian,
  NegativeSpectrum,
  SpectrumViolation,
  NoConvergence,
  SingularSylvester,
  NearSingular,
  ShapeMismatch,
  NonFinite,
  // manifolds
  UnsupportedGeodesic,
  UnsupportedDistance,
  BaseMismatch,
  InvalidPoint,
  // submanifolds
  UnsupportedAmbient,
  QuarticSolveFailure,
  NotOnSubmanifold,
  // cutengine
  OracleFailure,
  OnCutLocus,
  OnSubmanifold,
  NoCutInRange,
  // groupgeo
  MembershipViolation,
  LogSpectrumViolation,
  // equivariant
  ActionMismatch,
  NotInvariant,
  UnsupportedRegime,
  // parsing / io
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cutloci
