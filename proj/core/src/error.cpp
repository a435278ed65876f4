#include "cutloci/error.hpp"

namespace cutloci {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NegativeSpectrum: return "NegativeSpectrum";
    case ErrorCode::SpectrumViolation: return "SpectrumViolation";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularSylvester: return "SingularSylvester";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::UnsupportedGeodesic: return "UnsupportedGeodesic";
    case ErrorCode::UnsupportedDistance: return "UnsupportedDistance";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::UnsupportedAmbient: return "UnsupportedAmbient";
    case ErrorCode::QuarticSolveFailure: return "QuarticSolveFailure";
    case ErrorCode::NotOnSubmanifold: return "NotOnSubmanifold";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::OnCutLocus: return "OnCutLocus";
    case ErrorCode::OnSubmanifold: return "OnSubmanifold";
    case ErrorCode::NoCutInRange: return "NoCutInRange";
    case ErrorCode::MembershipViolation: return "MembershipViolation";
    case ErrorCode::LogSpectrumViolation: return "LogSpectrumViolation";
    case ErrorCode::ActionMismatch: return "ActionMismatch";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace cutloci
