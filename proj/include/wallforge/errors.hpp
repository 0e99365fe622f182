#pragma once

#include <stdexcept>
#include <string>

namespace wallforge {

enum class ErrorCode {
    InvalidParams,     // alpha <= 0, omega < 0, or non-finite input
    WrongRegime,       // operation needs a regime the parameters are not in
    IncompatibleParams,// two inputs that must share parameters do not
    MaxIters,          // Newton failed to reach the residual tolerance
    PositivityLost,    // iterate left the positive quadrant beyond the allowed slack
    SingularJacobian,  // block elimination hit a non-invertible pivot
    NotACrossing,      // recentering found no midpoint crossing in u
    TailTooShort,      // fit window has too few usable nodes
    NonPositiveTail,   // tail ordinate <= 0 inside the fit window
    ParseError,        // malformed profile/config file
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wallforge
