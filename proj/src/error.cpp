#include "dbz/error.hpp"

namespace dbz {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::NegativeEvenRoot: return "NegativeEvenRoot";
        case ErrorCode::ModeMismatch: return "ModeMismatch";
        case ErrorCode::NotExact: return "NotExact";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnboundVariable: return "UnboundVariable";
        case ErrorCode::AnchorMismatch: return "AnchorMismatch";
        case ErrorCode::UndeterminedValuation: return "UndeterminedValuation";
        case ErrorCode::LeadNotDivisible: return "LeadNotDivisible";
        case ErrorCode::RootNotRepresentable: return "RootNotRepresentable";
        case ErrorCode::EssentialSingularity: return "EssentialSingularity";
        case ErrorCode::BranchPoint: return "BranchPoint";
        case ErrorCode::InsufficientOrder: return "InsufficientOrder";
        case ErrorCode::RouteMismatch: return "RouteMismatch";
        case ErrorCode::ZeroRadiusCircle: return "ZeroRadiusCircle";
        case ErrorCode::OffSphere: return "OffSphere";
        case ErrorCode::NotExteriorMap: return "NotExteriorMap";
        case ErrorCode::NotPaperNormalized: return "NotPaperNormalized";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : Error(ErrorCode::SyntaxError, "at position " + std::to_string(position) + ": " + message),
      position_(position),
      detail_(message) {}

}  // namespace dbz
