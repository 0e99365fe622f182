#include "wallforge/errors.hpp"

namespace wallforge {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidParams:      return "InvalidParams";
        case ErrorCode::WrongRegime:        return "WrongRegime";
        case ErrorCode::IncompatibleParams: return "IncompatibleParams";
        case ErrorCode::MaxIters:           return "MaxIters";
        case ErrorCode::PositivityLost:     return "PositivityLost";
        case ErrorCode::SingularJacobian:   return "SingularJacobian";
        case ErrorCode::NotACrossing:       return "NotACrossing";
        case ErrorCode::TailTooShort:       return "TailTooShort";
        case ErrorCode::NonPositiveTail:    return "NonPositiveTail";
        case ErrorCode::ParseError:         return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace wallforge
