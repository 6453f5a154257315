#pragma once

namespace hopsim {

// A Monte Carlo estimate together with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

} // namespace hopsim
