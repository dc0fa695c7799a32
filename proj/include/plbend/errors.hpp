#ifndef PLBEND_ERRORS_HPP
#define PLBEND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plbend {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// k^2 (n_g^2 - n_s^2) <= 0: the index contrast supports no guided mode.
struct NoGuidedModeError : Error {
    using Error::Error;
};

// Root bracketing failed (no sign change over the search interval).
struct BracketError : Error {
    using Error::Error;
};

// beta^2 = k^2 n_g^2 - k_x^2 - k_y^2 <= 0: lowest mode is cut off.
struct ModeCutoffError : Error {
    using Error::Error;
};

// A coupling was requested from a mode whose amplitude was never fixed.
struct UnnormalizedModeError : Error {
    using Error::Error;
};

// Requested coupling/detuning lies outside the achievable range.
struct UnreachableTargetError : Error {
    using Error::Error;
};

struct NonHermitianError : Error {
    using Error::Error;
};

struct GridTooCoarseError : Error {
    using Error::Error;
};

struct AllZeroMatrixError : Error {
    using Error::Error;
};

// Configuration parse/validation failure; carries the offending field.
struct ConfigError : Error {
    std::string field;
    ConfigError(const std::string& field_name, const std::string& msg)
        : Error(field_name + ": " + msg), field(field_name) {}
};

} // namespace plbend

#endif
