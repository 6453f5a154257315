#pragma once

#include <cstdint>
#include <random>

namespace hopsim {

// Each consumer of randomness gets its own stream, derived by hashing
// (master_seed, trial_index, purpose, sub). Results are therefore a pure
// function of the seed tuple and independent of thread scheduling.
enum class StreamPurpose : std::uint64_t {
    topology = 1,
    mobiles = 2,
    sector_area = 3,
    epsilon_los = 4,
    epsilon_nlos = 5,
    oracle = 6,
    validation_case = 7,
    misc = 8,
};

std::uint64_t mix64(std::uint64_t x);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix64(seed ^ 0x9e3779b97f4a7c15ull)) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [lo, hi] (inclusive); rejection-free modulo bias is
    // negligible for the small ranges used here, but we reject anyway.
    std::uint64_t uniform_index(std::uint64_t n); // in [0, n)

    // Unit-mean exponential draw.
    double exponential() { return -std::log1p(-uniform01()); }

    // Gamma with integer shape >= 1 and unit scale (sum of exponentials).
    double gamma_int(int shape);

    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 gen_;
};

Rng derive_stream(std::uint64_t master, std::uint64_t trial, StreamPurpose purpose,
                  std::uint64_t sub = 0);

} // namespace hopsim
