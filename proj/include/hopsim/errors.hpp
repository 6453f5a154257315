#pragma once

#include <stdexcept>

namespace hopsim {

// Configuration file / override problems (bad key, bad value, violated constraint).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hard-core point placement exhausted its retry budget; the requested
// intensity/exclusion combination is too dense for the region.
struct PackingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The alternating-sum evaluation could not certify the requested accuracy.
struct NumericalInstability : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An argument outside an operation's domain (negative distance, non-square
// element count, unsupported fading order, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A direction needed by a gain computation is undefined (coincident points).
struct DegenerateGeometry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hopsim
