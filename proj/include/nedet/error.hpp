#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nedet {

enum class ErrorCode {
    DuplicateAddress,
    ZeroLevel,
    LevelOutOfRange,
    OutOfBand,
    InvalidDetector,
    ZeroCycles,
    EmptyConcept,
    MissingBand,
    WrongLearningMode,
    EmptyField,
    NoFreeDetector,
    AlreadyBound,
    UnknownLabel,
    InvalidConfig,
    ParseError,
    DimensionMismatch,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Validation errors map to CLI exit code 1, everything else to 2.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace nedet
