#include <doctest.h>

#include "hopsim/rng.hpp"

#include "oracles.hpp"

using namespace hopsim;

TEST_SUITE("rng") {

TEST_CASE("derived streams are reproducible and purpose-separated")
{
    Rng a = derive_stream(42, 7, StreamPurpose::topology);
    Rng b = derive_stream(42, 7, StreamPurpose::topology);
    Rng c = derive_stream(42, 7, StreamPurpose::mobiles);
    Rng d = derive_stream(42, 8, StreamPurpose::topology);
    bool all_equal = true;
    bool c_differs = false;
    bool d_differs = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        c_differs = c_differs || va != c.next_u64();
        d_differs = d_differs || va != d.next_u64();
    }
    CHECK(all_equal);
    CHECK(c_differs);
    CHECK(d_differs);
}

TEST_CASE("uniform01 stays in [0, 1)")
{
    Rng rng(3);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("poisson matches its mean and variance")
{
    Rng rng(11);
    for (double mean : {0.5, 5.0, 90.0, 650.0}) { // 650 exercises the chunked path
        oracles::MeanVar mv;
        const int n = 20000;
        for (int i = 0; i < n; ++i)
            mv.add(static_cast<double>(rng.poisson(mean)));
        const double se = std::sqrt(mean / n);
        CHECK(std::abs(mv.mean - mean) < 3.0 * se);
        CHECK(mv.variance() == doctest::Approx(mean).epsilon(0.10));
    }
    CHECK(Rng(1).poisson(0.0) == 0);
}

TEST_CASE("gamma_int has the right first two moments")
{
    Rng rng(5);
    oracles::MeanVar mv;
    const int n = 40000;
    for (int i = 0; i < n; ++i)
        mv.add(rng.gamma_int(3));
    CHECK(std::abs(mv.mean - 3.0) < 3.0 * std::sqrt(3.0 / n));
    CHECK(mv.variance() == doctest::Approx(3.0).epsilon(0.10));

    oracles::MeanVar exp_mv;
    for (int i = 0; i < n; ++i)
        exp_mv.add(rng.exponential());
    CHECK(std::abs(exp_mv.mean - 1.0) < 3.0 * std::sqrt(1.0 / n));
}

TEST_CASE("uniform_index covers its range")
{
    Rng rng(9);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 5000; ++i)
        ++counts[rng.uniform_index(5)];
    for (int c : counts)
        CHECK(c > 800); // expected 1000 each
}

} // TEST_SUITE
