#include "hopsim/rng.hpp"

#include <cmath>

#include "hopsim/errors.hpp"

namespace hopsim {

std::uint64_t mix64(std::uint64_t x)
{
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t Rng::uniform_index(std::uint64_t n)
{
    if (n == 0)
        throw DomainError("uniform_index: empty range");
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t v;
    do {
        v = gen_();
    } while (v >= limit);
    return v % n;
}

double Rng::gamma_int(int shape)
{
    if (shape < 1)
        throw DomainError("gamma_int: shape must be a positive integer");
    double acc = 0.0;
    for (int i = 0; i < shape; ++i)
        acc += exponential();
    return acc;
}

std::uint64_t Rng::poisson(double mean)
{
    if (!(mean >= 0.0))
        throw DomainError("poisson: mean must be >= 0");
    std::uint64_t count = 0;
    // Chunked multiplication method; exp(-chunk) stays far from underflow.
    while (mean > 0.0) {
        const double chunk = mean > 500.0 ? 500.0 : mean;
        mean -= chunk;
        const double threshold = std::exp(-chunk);
        double product = uniform01();
        while (product >= threshold) {
            ++count;
            product *= uniform01();
        }
    }
    return count;
}

Rng derive_stream(std::uint64_t master, std::uint64_t trial, StreamPurpose purpose,
                  std::uint64_t sub)
{
    std::uint64_t h = mix64(master);
    h = mix64(h ^ trial);
    h = mix64(h ^ static_cast<std::uint64_t>(purpose));
    h = mix64(h ^ sub);
    return Rng(h);
}

} // namespace hopsim
