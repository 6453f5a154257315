#include <doctest.h>

#include <cmath>

#include "hopsim/errors.hpp"
#include "hopsim/outage.hpp"
#include "hopsim/propagation.hpp"

#include "oracles.hpp"

using namespace hopsim;

namespace {

const ChannelParams kChannel{2.0, 10.0, 0.01, 2.0, 4.0, 3, 1, std::pow(10.0, 2.5)};

} // namespace

TEST_SUITE("propagation") {

TEST_CASE("path_loss normalization and direct values")
{
    CHECK(path_loss(0.01, kChannel) == doctest::Approx(1.0));
    CHECK(path_loss(2.0, kChannel) == doctest::Approx(2.5e-5));   // LOS boundary, alpha = 2
    CHECK(path_loss(5.0, kChannel) == doctest::Approx(1.6e-7));   // NLOS, alpha = 4
    CHECK(path_loss(0.001, kChannel) == doctest::Approx(1.0));    // near-field clamp
    CHECK_THROWS_AS(path_loss(0.0, kChannel), DomainError);
    CHECK_THROWS_AS(path_loss(-1.0, kChannel), DomainError);
}

TEST_CASE("path_loss is non-increasing per zone and jumps at r_los")
{
    double prev = path_loss(kChannel.d0, kChannel);
    for (double d = kChannel.d0; d <= kChannel.r_los; d += 0.001) {
        const double f = path_loss(d, kChannel);
        CHECK(f <= prev + 1e-15);
        prev = f;
    }
    prev = path_loss(std::nextafter(kChannel.r_los, 100.0), kChannel);
    for (double d = kChannel.r_los + 1e-6; d <= kChannel.r_nlos; d += 0.01) {
        const double f = path_loss(d, kChannel);
        CHECK(f <= prev + 1e-15);
        prev = f;
    }
    const double before = path_loss(kChannel.r_los, kChannel);
    const double after = path_loss(std::nextafter(kChannel.r_los, 100.0), kChannel);
    const double expected_ratio =
        std::pow(kChannel.r_los, kChannel.alpha_nlos - kChannel.alpha_los);
    CHECK(before / after == doctest::Approx(expected_ratio).epsilon(1e-9));
}

TEST_CASE("zone classification boundaries")
{
    CHECK(zone_of(1.0, kChannel) == Zone::los);
    CHECK(zone_of(5.0, kChannel) == Zone::nlos);
    CHECK(zone_of(12.0, kChannel) == Zone::blocked);
    CHECK(zone_of(2.0, kChannel) == Zone::los);   // boundary inclusive
    CHECK(zone_of(10.0, kChannel) == Zone::nlos); // boundary inclusive
    CHECK_THROWS_AS(zone_of(-0.1, kChannel), DomainError);
}

TEST_CASE("upa_params table")
{
    const AntennaConfig a256 = upa_params(256);
    CHECK(a256.beamwidth == doctest::Approx(M_PI / 8.0));
    CHECK(a256.mainlobe == doctest::Approx(256.0));
    CHECK(a256.sidelobe == doctest::Approx(11.8673).epsilon(1e-4));

    const AntennaConfig a16 = upa_params(16);
    CHECK(a16.beamwidth == doctest::Approx(M_PI / 2.0));
    CHECK(a16.mainlobe == doctest::Approx(16.0));

    CHECK(upa_params(4).sidelobe == doctest::Approx(2.0)); // sin(3*pi/4)^2 = 1/2

    CHECK_THROWS_AS(upa_params(15), DomainError);
    CHECK_THROWS_AS(upa_params(0), DomainError);
    CHECK_THROWS_AS(upa_params(-4), DomainError);

    double prev_theta = 1e9;
    for (int n : {16, 64, 256, 1024}) {
        const AntennaConfig a = upa_params(n);
        CHECK(a.mainlobe > a.sidelobe);
        CHECK(a.sidelobe > 0.0);
        CHECK(a.beamwidth < prev_theta);
        prev_theta = a.beamwidth;
    }
}

TEST_CASE("receive_gain wedge, boundary inclusive")
{
    const AntennaConfig ant = upa_params(256);
    const double psi = 0.3;
    CHECK(receive_gain(psi, psi, ant) == ant.mainlobe);
    // Exact boundary offsets (psi = 0 keeps the angle arithmetic exact).
    CHECK(receive_gain(ant.beamwidth / 2.0, 0.0, ant) == ant.mainlobe);
    CHECK(receive_gain(-ant.beamwidth / 2.0, 0.0, ant) == ant.mainlobe);
    CHECK(receive_gain(std::nextafter(ant.beamwidth / 2.0, 4.0), 0.0, ant) == ant.sidelobe);
    CHECK(receive_gain(psi + M_PI, psi, ant) == ant.sidelobe);

    // The full-gain set has measure theta.
    Rng rng(7);
    int mainlobe_hits = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        if (receive_gain(rng.uniform(-M_PI, M_PI), psi, ant) == ant.mainlobe)
            ++mainlobe_hits;
    const double frac = static_cast<double>(mainlobe_hits) / n;
    const double expected = ant.beamwidth / (2.0 * M_PI);
    CHECK(std::abs(frac - expected) < 3.0 * std::sqrt(expected * (1.0 - expected) / n));
}

TEST_CASE("transmit_gain geometry")
{
    const AntennaConfig ant = upa_params(16); // beamwidth pi/2

    // Serving BS at the origin: the directions coincide.
    CHECK(transmit_gain({3.0, 1.0}, {0.0, 0.0}, ant) == ant.mainlobe);
    // Serving BS directly opposite the origin as seen from x.
    CHECK(transmit_gain({2.0, 0.0}, {5.0, 0.0}, ant) == ant.sidelobe);

    CHECK_THROWS_AS(transmit_gain({0.0, 0.0}, {1.0, 0.0}, ant), DegenerateGeometry);
    CHECK_THROWS_AS(transmit_gain({1.0, 1.0}, {1.0, 1.0}, ant), DegenerateGeometry);

    // Randomized check against an independent dot/cross-product oracle.
    Rng rng(13);
    for (int i = 0; i < 5000; ++i) {
        const Point x = sample_point_in_region({0.5, 10.0}, rng);
        const Point serving = sample_point_in_region({0.5, 12.0}, rng);
        if ((serving - x).norm() < 1e-9)
            continue;
        const Point u{-x.x, -x.y};
        const Point v = serving - x;
        const double dot = u.x * v.x + u.y * v.y;
        const double cross = u.x * v.y - u.y * v.x;
        const double sep = std::abs(std::atan2(cross, dot));
        const double expected = sep <= ant.beamwidth / 2.0 ? ant.mainlobe : ant.sidelobe;
        CHECK(transmit_gain(x, serving, ant) == expected);
    }
}

TEST_CASE("transmit_gain literal angle convention differs where it should")
{
    const AntennaConfig ant = upa_params(16);
    // Mobile on the +x axis, serving BS roughly along +x beyond it: the beam
    // points away from the origin, so the geometric reading gives the
    // sidelobe while the literal reading compares the mobile azimuth (0) and
    // returns the mainlobe.
    const Point x{4.0, 0.0};
    const Point serving{8.0, 0.5};
    CHECK(transmit_gain(x, serving, ant, false) == ant.sidelobe);
    CHECK(transmit_gain(x, serving, ant, true) == ant.mainlobe);
}

TEST_CASE("fading conventions: unit means and shapes")
{
    Rng rng(19);
    const int n = 60000;
    const int hops = 2;
    const int m_los = 3;

    oracles::MeanVar hop_gain, codeword_gain, nlos_gain, nlos2_gain;
    for (int i = 0; i < n; ++i) {
        double h = 0.0;
        for (int t = 0; t < hops; ++t) {
            const double g = draw_reference_hop_fading(rng, m_los, hops);
            hop_gain.add(g);
            h += g;
        }
        codeword_gain.add(h);
        nlos_gain.add(draw_interferer_fading(rng, 1));
        nlos2_gain.add(draw_interferer_fading(rng, 2));
    }
    // Per-hop mean 1/L; summed gain mean 1 with variance 1/(m_los*L).
    CHECK(std::abs(hop_gain.mean - 0.5) < 3.0 * hop_gain.std_error());
    CHECK(std::abs(codeword_gain.mean - 1.0) < 3.0 * codeword_gain.std_error());
    CHECK(codeword_gain.variance() == doctest::Approx(1.0 / 6.0).epsilon(0.05));
    // Exponential special case: mean 1, variance 1.
    CHECK(std::abs(nlos_gain.mean - 1.0) < 3.0 * nlos_gain.std_error());
    CHECK(nlos_gain.variance() == doctest::Approx(1.0).epsilon(0.05));
    // Higher-order interferer fading keeps mean 1, variance 1/m.
    CHECK(std::abs(nlos2_gain.mean - 1.0) < 3.0 * nlos2_gain.std_error());
    CHECK(nlos2_gain.variance() == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("channel params validation")
{
    ChannelParams bad = kChannel;
    bad.d0 = 3.0; // d0 > r_los
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = kChannel;
    bad.r_nlos = 1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = kChannel;
    bad.m_los = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_NOTHROW(kChannel.validate());
}

} // TEST_SUITE
