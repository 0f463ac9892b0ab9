#include "fliu/error.hpp"

namespace fliu {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::DimensionError: return "DimensionError";
        case ErrorCode::InvalidParam: return "InvalidParam";
        case ErrorCode::InvalidBasis: return "InvalidBasis";
        case ErrorCode::BasisKindError: return "BasisKindError";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::UnderdeterminedCurveFit: return "UnderdeterminedCurveFit";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::SaturatedSmoother: return "SaturatedSmoother";
        case ErrorCode::LeverageOne: return "LeverageOne";
        case ErrorCode::TuningFailed: return "TuningFailed";
        case ErrorCode::InsufficientDof: return "InsufficientDof";
        case ErrorCode::DegeneratePlugIn: return "DegeneratePlugIn";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::JoinError: return "JoinError";
        case ErrorCode::InvalidSplit: return "InvalidSplit";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace fliu
