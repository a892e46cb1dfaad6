#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace texref {

enum class ErrorCode {
    Io,
    UnsupportedFormat,
    ImageTooSmall,
    EmptyDataset,
    BadFilename,
    DuplicateId,
    Precondition,
    InvalidArgument,
    LayoutMismatch,
    EmptyCandidates,
    UnsupportedVersion,
    Truncated,
    CorruptFeatureLength,
    Corrupt,
    IncompatibleConfig,
    DegenerateEvaluation,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable category. Messages name the
/// offending input (path, flag value, ...) and never contain stack traces.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace texref
