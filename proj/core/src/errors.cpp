#include "lamebethe/errors.hpp"

namespace lamebethe {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonAdmissible: return "NonAdmissible";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::SingularConfiguration: return "SingularConfiguration";
    case ErrorCode::NotClassicalCase: return "NotClassicalCase";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotCritical: return "NotCritical";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::OffDiagonalViolation: return "OffDiagonalViolation";
    case ErrorCode::IrregularSingularity: return "IrregularSingularity";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::NotASolution: return "NotASolution";
    case ErrorCode::FlagViolation: return "FlagViolation";
    case ErrorCode::PathThroughSingularity: return "PathThroughSingularity";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::ExponentMismatch: return "ExponentMismatch";
    case ErrorCode::BoundViolation: return "BoundViolation";
  }
  return "Unknown";
}

}  // namespace lamebethe
