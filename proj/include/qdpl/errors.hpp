// errors.hpp — exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace qdpl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Frequency-domain quadrature failed to reach the requested tolerance.
struct QuadratureError : Error {
    double achieved;
    QuadratureError(const std::string& what, double achieved_error)
        : Error(what + " (achieved error estimate " + std::to_string(achieved_error) + ")"),
          achieved(achieved_error) {}
};

// Tabulated correlator has not decayed below tolerance at the end of the tau grid.
struct TailNotDecayed : Error {
    using Error::Error;
};

struct EigenFailure : Error {
    using Error::Error;
};

// Liouvillian null space is not (numerically) one-dimensional.
struct DegenerateNullSpace : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct StepSizeUnderflow : Error {
    using Error::Error;
};

struct NoPeak : Error {
    using Error::Error;
};

struct FitDiverged : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace qdpl
