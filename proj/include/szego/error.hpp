#ifndef SZEGO_ERROR_HPP
#define SZEGO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace szego {

enum class ErrorCode {
    InvalidArgument,
    TruncTooSmall,
    Unresolved,
    NotEigenvector,
    PoleCollision,
    MeasureMismatch,
    Degenerate,
    NoEscape,
    PoleOutside,
    DriftExceeded,
    NonFinite,
};

/// Stable upper-case tag used in reports and CLI failure lists.
std::string_view to_string(ErrorCode code) noexcept;

class SzegoError : public std::runtime_error {
public:
    SzegoError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace szego

#endif
