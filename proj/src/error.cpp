#include "nedet/error.hpp"

namespace nedet {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DuplicateAddress: return "DuplicateAddress";
    case ErrorCode::ZeroLevel: return "ZeroLevel";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::OutOfBand: return "OutOfBand";
    case ErrorCode::InvalidDetector: return "InvalidDetector";
    case ErrorCode::ZeroCycles: return "ZeroCycles";
    case ErrorCode::EmptyConcept: return "EmptyConcept";
    case ErrorCode::MissingBand: return "MissingBand";
    case ErrorCode::WrongLearningMode: return "WrongLearningMode";
    case ErrorCode::EmptyField: return "EmptyField";
    case ErrorCode::NoFreeDetector: return "NoFreeDetector";
    case ErrorCode::AlreadyBound: return "AlreadyBound";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DuplicateAddress:
    case ErrorCode::ZeroLevel:
    case ErrorCode::LevelOutOfRange:
    case ErrorCode::OutOfBand:
    case ErrorCode::InvalidDetector:
    case ErrorCode::UnknownLabel:
    case ErrorCode::InvalidConfig:
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message)
    , code_(code)
    , detail_(message)
{
}

}  // namespace nedet
