#include "hopsim/geometry.hpp"

#include <cmath>
#include <string>

#include "hopsim/errors.hpp"

namespace hopsim {

double wrap_angle(double a)
{
    if (a > -M_PI && a <= M_PI)
        return a; // already canonical; keep boundary comparisons exact
    double w = std::fmod(a + M_PI, 2.0 * M_PI);
    if (w <= 0.0)
        w += 2.0 * M_PI;
    return w - M_PI; // (-pi, pi]
}

Point sample_point_in_region(const Region& region, Rng& rng)
{
    const double u = rng.uniform01();
    const double v = rng.uniform01();
    const double r2 = region.inner * region.inner +
                      u * (region.outer * region.outer - region.inner * region.inner);
    const double r = std::sqrt(r2);
    const double phi = 2.0 * M_PI * v;
    return {r * std::cos(phi), r * std::sin(phi)};
}

int nearest_bs(Point x, const NetworkTopology& topology)
{
    int best = 0;
    double best_d2 = distance_sq(topology.bs[0], x);
    for (std::size_t j = 1; j < topology.bs.size(); ++j) {
        const double d2 = distance_sq(topology.bs[j], x);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<int>(j);
        }
    }
    return best;
}

bool in_reference_sector(Point x, const NetworkTopology& topology)
{
    if (nearest_bs(x, topology) != topology.reference_index)
        return false;
    const double off = wrap_angle(x.azimuth() - topology.sector_offset);
    return std::abs(off) <= topology.wedge_half_angle();
}

bool SectorGeometry::contains(Point p) const
{
    if (model == SectorModel::disc_wedge) {
        if (p.norm() > r_los)
            return false;
        const double off = wrap_angle(p.azimuth() - topology->sector_offset);
        return std::abs(off) <= topology->wedge_half_angle();
    }
    return in_reference_sector(p, *topology);
}

NetworkTopology sample_ucp(double lambda_bs, double r_min, const Region& region,
                           const SectorLayout& layout, int retry_budget, Rng& rng)
{
    if (!(lambda_bs > 0.0))
        throw DomainError("sample_ucp: lambda_bs must be > 0");
    if (r_min < 0.0)
        throw DomainError("sample_ucp: r_min must be >= 0");
    if (!(region.outer > region.inner) || region.inner < 0.0)
        throw DomainError("sample_ucp: degenerate region");

    NetworkTopology topo;
    topo.reference_index = 0;
    topo.sector_offset = layout.psi;
    topo.sectors_per_bs = layout.sectors_per_bs;

    const std::uint64_t target = rng.poisson(lambda_bs * region.area());
    topo.bs.push_back({0.0, 0.0}); // reference BS, first accepted point

    const double r_min_sq = r_min * r_min;
    while (topo.bs.size() < std::max<std::uint64_t>(target, 1)) {
        bool placed = false;
        for (int attempt = 0; attempt < retry_budget; ++attempt) {
            const Point candidate = sample_point_in_region(region, rng);
            bool clear = true;
            for (const Point& accepted : topo.bs) {
                if (distance_sq(candidate, accepted) < r_min_sq) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                topo.bs.push_back(candidate);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw PackingFailure("sample_ucp: could not place point " +
                                 std::to_string(topo.bs.size()) + " of " +
                                 std::to_string(target) + " within " +
                                 std::to_string(retry_budget) +
                                 " proposals (intensity too dense for r_min)");
    }
    return topo;
}

MobileSet sample_ppp(double lambda, const Region& region, const SectorGeometry* exclusion,
                     int hop_index, Rng& rng)
{
    if (lambda < 0.0)
        throw DomainError("sample_ppp: lambda must be >= 0");

    MobileSet set;
    set.hop_index = hop_index;
    if (lambda == 0.0)
        return set;

    const std::uint64_t count = rng.poisson(lambda * region.area());
    set.positions.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const Point p = sample_point_in_region(region, rng);
        ++set.proposed;
        if (exclusion != nullptr && exclusion->contains(p)) {
            ++set.discarded;
            continue;
        }
        set.positions.push_back(p);
    }
    return set;
}

Estimate sector_area(const SectorGeometry& sector, const Region& region,
                     std::size_t n_samples, Rng& rng)
{
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (sector.contains(sample_point_in_region(region, rng)))
            ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
    const double area = region.area();
    return {area * p, area * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples))};
}

} // namespace hopsim
