#include "szego/error.hpp"

namespace szego {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::TruncTooSmall: return "TRUNC_TOO_SMALL";
    case ErrorCode::Unresolved: return "UNRESOLVED";
    case ErrorCode::NotEigenvector: return "NOT_EIGENVECTOR";
    case ErrorCode::PoleCollision: return "POLE_COLLISION";
    case ErrorCode::MeasureMismatch: return "MEASURE_MISMATCH";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::NoEscape: return "NO_ESCAPE";
    case ErrorCode::PoleOutside: return "POLE_OUTSIDE";
    case ErrorCode::DriftExceeded: return "DRIFT_EXCEEDED";
    case ErrorCode::NonFinite: return "NONFINITE";
    }
    return "UNKNOWN";
}

} // namespace szego
