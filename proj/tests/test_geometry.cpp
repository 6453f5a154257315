#include <doctest.h>

#include <array>
#include <cmath>

#include "hopsim/errors.hpp"
#include "hopsim/geometry.hpp"
#include "hopsim/propagation.hpp"

#include "oracles.hpp"

using namespace hopsim;

namespace {

NetworkTopology single_bs_topology(int sectors, double psi = 0.0)
{
    NetworkTopology topo;
    topo.bs = {{0.0, 0.0}};
    topo.reference_index = 0;
    topo.sector_offset = psi;
    topo.sectors_per_bs = sectors;
    return topo;
}

NetworkTopology random_topology(int n_bs, double radius, Rng& rng, int sectors = 16)
{
    NetworkTopology topo = single_bs_topology(sectors);
    const Region region{0.0, radius};
    for (int i = 1; i < n_bs; ++i)
        topo.bs.push_back(sample_point_in_region(region, rng));
    return topo;
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("wrap_angle maps into (-pi, pi]")
{
    CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(3.0 * M_PI / 2.0) == doctest::Approx(-M_PI / 2.0));
    CHECK(wrap_angle(7.0 * M_PI) == doctest::Approx(M_PI));
    for (double a = -20.0; a < 20.0; a += 0.37) {
        const double w = wrap_angle(a);
        CHECK(w > -M_PI);
        CHECK(w <= M_PI);
        CHECK(std::remainder(w - a, 2.0 * M_PI) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("region area and membership")
{
    const Region disc{0.0, 10.0};
    CHECK(disc.area() == doctest::Approx(100.0 * M_PI));
    const Region annulus{2.0, 10.0};
    CHECK(annulus.area() == doctest::Approx(96.0 * M_PI));

    Rng rng(1);
    for (int i = 0; i < 20000; ++i) {
        CHECK(annulus.contains(sample_point_in_region(annulus, rng)));
    }
}

TEST_CASE("ucp with vanishing intensity keeps only the reference BS")
{
    Rng rng(1);
    const NetworkTopology topo = sample_ucp(1e-12, 1.0, {0.0, 12.0}, {0.0, 16}, 1000, rng);
    REQUIRE(topo.bs.size() == 1);
    CHECK(topo.bs[0].x == 0.0);
    CHECK(topo.bs[0].y == 0.0);
    CHECK(topo.reference_index == 0);
}

TEST_CASE("ucp with r_min = 0 reproduces Poisson counts")
{
    // Two-sample comparison against the plain PPP sampler.
    const Region region{0.0, 8.0};
    const double lambda = 0.3;
    const int seeds = 3000;
    oracles::MeanVar ucp_counts, ppp_counts;
    for (int s = 0; s < seeds; ++s) {
        Rng a = derive_stream(100, s, StreamPurpose::topology);
        ucp_counts.add(static_cast<double>(
            sample_ucp(lambda, 0.0, region, {0.0, 16}, 1000, a).bs.size()));
        Rng b = derive_stream(200, s, StreamPurpose::mobiles);
        ppp_counts.add(
            static_cast<double>(sample_ppp(lambda, region, nullptr, 1, b).positions.size()));
    }
    const double combined_se =
        std::sqrt(ucp_counts.std_error() * ucp_counts.std_error() +
                  ppp_counts.std_error() * ppp_counts.std_error());
    CHECK(std::abs(ucp_counts.mean - ppp_counts.mean) < 3.0 * combined_se);
    // And against the analytic mean (the forced reference point adds
    // P(N = 0) ~ 0 here).
    CHECK(std::abs(ucp_counts.mean - lambda * region.area()) < 3.0 * ucp_counts.std_error());
}

TEST_CASE("ucp quadrat counts are uniform when r_min = 0")
{
    const Region region{0.0, 8.0};
    const double lambda = 0.3;
    const int seeds = 400;
    // Eight equal-area cells: four quadrants split radially at R/sqrt(2).
    std::array<double, 8> counts{};
    double total = 0.0;
    for (int s = 0; s < seeds; ++s) {
        Rng rng = derive_stream(300, s, StreamPurpose::topology);
        const NetworkTopology topo = sample_ucp(lambda, 0.0, region, {0.0, 16}, 1000, rng);
        for (std::size_t i = 1; i < topo.bs.size(); ++i) { // skip the forced origin
            const Point p = topo.bs[i];
            const int quadrant = (p.x >= 0.0 ? 0 : 1) + (p.y >= 0.0 ? 0 : 2);
            const int band = p.norm() <= 8.0 / std::sqrt(2.0) ? 0 : 4;
            counts[quadrant + band] += 1.0;
            total += 1.0;
        }
    }
    for (double c : counts) {
        const double expected = total / 8.0;
        CHECK(std::abs(c - expected) < 3.0 * std::sqrt(expected));
    }
}

TEST_CASE("ucp honors the exclusion radius")
{
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        Rng rng = derive_stream(seed, 0, StreamPurpose::topology);
        const NetworkTopology topo = sample_ucp(0.2, 1.0, {0.0, 12.0}, {0.0, 16}, 1000, rng);
        for (std::size_t i = 0; i < topo.bs.size(); ++i)
            for (std::size_t j = i + 1; j < topo.bs.size(); ++j)
                REQUIRE(distance(topo.bs[i], topo.bs[j]) >= 1.0);
    }
}

TEST_CASE("ucp packing failure reports over-dense requests")
{
    Rng rng(7);
    CHECK_THROWS_AS(sample_ucp(5.0, 1.0, {0.0, 6.0}, {0.0, 16}, 50, rng), PackingFailure);
}

TEST_CASE("ppp basics: empty set, mean count, thinning")
{
    Rng rng(1);
    CHECK(sample_ppp(0.0, {0.0, 10.0}, nullptr, 1, rng).positions.empty());

    // Mean count over many seeds, lambda = 1 over a radius-10 disc.
    const Region disc{0.0, 10.0};
    double total = 0.0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) {
        Rng r = derive_stream(11, s, StreamPurpose::mobiles);
        total += static_cast<double>(sample_ppp(1.0, disc, nullptr, 1, r).positions.size());
    }
    const double expected = 100.0 * M_PI * seeds;
    CHECK(std::abs(total - expected) < 3.0 * std::sqrt(expected)); // Poisson total

    // Thinning: no emitted point satisfies the sector predicate, and the
    // audit counters balance.
    const NetworkTopology topo = single_bs_topology(8);
    const SectorGeometry sector{&topo, SectorModel::voronoi_wedge, 2.0};
    for (int s = 0; s < 50; ++s) {
        Rng r = derive_stream(12, s, StreamPurpose::mobiles);
        const MobileSet set = sample_ppp(1.0, disc, &sector, 1, r);
        CHECK(set.proposed == set.positions.size() + set.discarded);
        CHECK(set.discarded > 0); // wedge of a single-BS cell always thins
        for (const Point& p : set.positions)
            REQUIRE(!sector.contains(p));
    }
}

TEST_CASE("serving_bs selects by path gain with lowest-index ties")
{
    const ChannelParams channel{2.0, 10.0, 0.01, 2.0, 4.0, 3, 1, 316.0};
    const auto law = [&](double d) { return path_loss(d, channel); };

    NetworkTopology topo = single_bs_topology(16);
    CHECK(serving_bs({3.0, 4.0}, topo, law) == 0);

    topo.bs = {{1.0, 0.0}, {-3.0, 0.0}};
    CHECK(serving_bs({0.0, 0.0}, topo, law) == 0); // distance 1 beats distance 3

    // Randomized agreement with brute-force nearest neighbor (the law is
    // monotone when r_los >= 1) and with the two-zone fast path.
    Rng rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        const NetworkTopology random = random_topology(10, 10.0, rng);
        for (int q = 0; q < 100; ++q) {
            const Point x = sample_point_in_region({0.0, 10.0}, rng);
            const int by_law = serving_bs(x, random, law);
            CHECK(by_law == oracles::nearest_brute(x, random.bs));
            CHECK(by_law == serving_bs_pathlaw(x, random, channel));
        }
    }
}

TEST_CASE("serving_bs differs from nearest when r_los < 1")
{
    // With r_los = 0.5 the law jumps upward across the zone boundary, so a
    // slightly farther NLOS-band station can win.
    const ChannelParams channel{0.5, 10.0, 0.1, 2.0, 4.0, 3, 1, 316.0};
    const auto law = [&](double d) { return path_loss(d, channel); };
    NetworkTopology topo = single_bs_topology(16);
    topo.bs = {{0.49, 0.0}, {-0.51, 0.0}};
    const Point x{0.0, 0.0};
    CHECK(oracles::nearest_brute(x, topo.bs) == 0);
    CHECK(serving_bs(x, topo, law) == 1);
    CHECK(serving_bs_pathlaw(x, topo, channel) == 1);

    Rng rng(23);
    for (int rep = 0; rep < 200; ++rep) {
        const NetworkTopology random = random_topology(8, 3.0, rng);
        const Point q = sample_point_in_region({0.0, 3.0}, rng);
        CHECK(serving_bs(q, random, law) == serving_bs_pathlaw(q, random, channel));
    }
}

TEST_CASE("serving_bs is invariant under monotone transforms of the law")
{
    const ChannelParams channel{2.0, 10.0, 0.01, 2.0, 4.0, 3, 1, 316.0};
    const auto law = [&](double d) { return path_loss(d, channel); };
    const auto cubed = [&](double d) { return std::pow(path_loss(d, channel), 3.0); };
    const auto logged = [&](double d) { return std::log(path_loss(d, channel)); };
    Rng rng(29);
    const NetworkTopology topo = random_topology(12, 10.0, rng);
    for (int q = 0; q < 300; ++q) {
        const Point x = sample_point_in_region({0.0, 10.0}, rng);
        const int base = serving_bs(x, topo, law);
        CHECK(base == serving_bs(x, topo, cubed));
        CHECK(base == serving_bs(x, topo, logged));
    }
}

TEST_CASE("in_reference_sector: wedge membership")
{
    Rng rng(31);
    NetworkTopology topo = random_topology(6, 10.0, rng, 16);
    topo.sector_offset = 0.7;

    const Point inside{0.05 * std::cos(0.7), 0.05 * std::sin(0.7)};
    CHECK(in_reference_sector(inside, topo));
    const Point behind{0.05 * std::cos(0.7 + M_PI), 0.05 * std::sin(0.7 + M_PI)};
    CHECK(!in_reference_sector(behind, topo));

    for (int i = 0; i < 10000; ++i) {
        const Point x = sample_point_in_region({0.0, 10.0}, rng);
        CHECK(in_reference_sector(x, topo) == oracles::sector_brute(x, topo));
    }
}

TEST_CASE("sector_area matches the analytic wedge for a single BS")
{
    const NetworkTopology topo = single_bs_topology(16); // theta = 2*pi/16
    const SectorGeometry sector{&topo, SectorModel::voronoi_wedge, 2.0};
    const Region disc{0.0, 5.0};
    Rng rng(37);
    const Estimate est = sector_area(sector, disc, 100000, rng);
    const double expected = disc.area() / 16.0;
    CHECK(std::abs(est.value - expected) < 3.0 * est.std_error);

    // Region radially disjoint from a disc-bounded wedge.
    const SectorGeometry bounded{&topo, SectorModel::disc_wedge, 2.0};
    Rng rng2(38);
    CHECK(sector_area(bounded, {5.0, 6.0}, 100000, rng2).value == 0.0);
}

TEST_CASE("sector_area estimates at different sample counts agree")
{
    Rng rng(41);
    const NetworkTopology topo = random_topology(20, 12.0, rng, 16);
    const SectorGeometry sector{&topo, SectorModel::voronoi_wedge, 2.0};
    const Region disc{0.0, 2.0};
    Rng r1(101), r2(102);
    const Estimate small = sector_area(sector, disc, 100000, r1);
    const Estimate large = sector_area(sector, disc, 1000000, r2);
    const double combined =
        std::sqrt(small.std_error * small.std_error + large.std_error * large.std_error);
    CHECK(std::abs(small.value - large.value) < 3.0 * combined);
}

TEST_CASE("sector_area is bounded by the wedge and the Voronoi cell")
{
    Rng rng(43);
    const NetworkTopology topo = random_topology(25, 12.0, rng, 16);
    const SectorGeometry sector{&topo, SectorModel::voronoi_wedge, 2.0};
    const Region disc{0.0, 12.0};
    Rng r1(11), r2(12);
    const Estimate sec = sector_area(sector, disc, 200000, r1);

    const double wedge_area = disc.area() / 16.0;
    // Voronoi cell of the reference BS, by hit-or-miss with the same region.
    std::size_t cell_hits = 0;
    const std::size_t n = 200000;
    for (std::size_t i = 0; i < n; ++i)
        if (nearest_bs(sample_point_in_region(disc, r2), topo) == topo.reference_index)
            ++cell_hits;
    const double cell_area = disc.area() * static_cast<double>(cell_hits) / n;
    const double cell_se =
        disc.area() * std::sqrt((double(cell_hits) / n) * (1.0 - double(cell_hits) / n) / n);

    CHECK(sec.value <= wedge_area + 3.0 * sec.std_error);
    CHECK(sec.value <=
          cell_area + 3.0 * std::sqrt(sec.std_error * sec.std_error + cell_se * cell_se));
}

} // TEST_SUITE
