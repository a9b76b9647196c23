#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dbz {

enum class ErrorCode {
    DivisionByZero,
    NegativeEvenRoot,
    ModeMismatch,
    NotExact,
    SyntaxError,
    UnboundVariable,
    AnchorMismatch,
    UndeterminedValuation,
    LeadNotDivisible,
    RootNotRepresentable,
    EssentialSingularity,
    BranchPoint,
    InsufficientOrder,
    RouteMismatch,
    ZeroRadiusCircle,
    OffSphere,
    NotExteriorMap,
    NotPaperNormalized,
    InsufficientSamples,
    InvalidArgument,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every failure raised by the engine. `code()` names the failure the way the
/// CLI reports it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message);

    /// 0-based byte offset into the parsed text.
    std::size_t position() const noexcept { return position_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t position_;
    std::string detail_;
};

}  // namespace dbz
