#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fliu {

enum class ErrorCode {
    NonFinite,
    DegenerateInput,
    SingularSystem,
    DimensionError,
    InvalidParam,
    InvalidBasis,
    BasisKindError,
    DomainError,
    UnderdeterminedCurveFit,
    GridMismatch,
    SaturatedSmoother,
    LeverageOne,
    TuningFailed,
    InsufficientDof,
    DegeneratePlugIn,
    ParseError,
    JoinError,
    InvalidSplit,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the
// CLI maps them onto process exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fliu
