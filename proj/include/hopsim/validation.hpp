#pragma once

#include <cstdint>
#include <vector>

#include "hopsim/system_config.hpp"

namespace hopsim {

// One randomized closed-form-vs-oracle comparison case.
struct ValidationOutcome {
    std::uint64_t index = 0;
    int m_los = 1;
    int hops = 1;
    double beta = 1.0;
    std::size_t n_los = 0;
    std::size_t n_nlos = 0;
    double closed_form = 0.0;
    double oracle = 0.0;
    double oracle_std_error = 0.0;
    double abs_diff = 0.0;
    double tolerance = 0.0; // max(0.01, 4 * oracle std error)
    bool pass = false;
};

// Randomized snapshots (up to 20 interferers, m_los in {1,3}, L in {1,2,4},
// beta log-uniform on [0.1, 10]) compared against the fading oracle.
std::vector<ValidationOutcome> run_validation(const SystemConfig& config, std::size_t n_cases,
                                              std::uint64_t seed, std::size_t oracle_draws);

} // namespace hopsim
