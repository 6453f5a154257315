#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hopsim/estimate.hpp"
#include "hopsim/rng.hpp"

namespace hopsim {

struct Point {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    // Azimuth in (-pi, pi]; undefined at the origin (atan2 returns 0 there).
    double azimuth() const { return std::atan2(y, x); }
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline double distance(Point a, Point b) { return (a - b).norm(); }
inline double distance_sq(Point a, Point b) { return (a - b).norm_sq(); }

// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

// Disc or annulus centered at the origin.
struct Region {
    double inner = 0.0; // meters, >= 0
    double outer = 0.0; // meters, > inner

    double area() const { return M_PI * (outer * outer - inner * inner); }
    bool contains(Point p) const {
        const double d2 = p.norm_sq();
        return d2 >= inner * inner && d2 <= outer * outer;
    }
};

// Uniform point on a disc/annulus (two draws per point, always).
Point sample_point_in_region(const Region& region, Rng& rng);

struct SectorLayout {
    double psi = 0.0;       // beam offset angle of the reference sector
    int sectors_per_bs = 1; // number of fixed sector beams per base station
};

struct NetworkTopology {
    std::vector<Point> bs;
    int reference_index = 0;
    double sector_offset = 0.0; // psi
    int sectors_per_bs = 1;

    double wedge_half_angle() const { return M_PI / sectors_per_bs; }
};

struct MobileSet {
    std::vector<Point> positions;
    int hop_index = 1;
    // Thinning audit counters.
    std::uint64_t proposed = 0;
    std::uint64_t discarded = 0;
};

enum class SectorModel { voronoi_wedge, disc_wedge };

// Membership test for the reference cell sector. Under voronoi_wedge the
// sector is (nearest BS is the reference BS) AND (azimuth within the wedge);
// under disc_wedge it is (distance <= r_los) AND (azimuth within the wedge).
struct SectorGeometry {
    const NetworkTopology* topology = nullptr;
    SectorModel model = SectorModel::voronoi_wedge;
    double r_los = 0.0; // used by disc_wedge only

    bool contains(Point p) const;
};

// Index of the nearest base station; ties resolve to the lowest index.
int nearest_bs(Point x, const NetworkTopology& topology);

// Serving BS under an arbitrary path-loss law: argmax_j f(|Y_j - x|),
// ties resolved to the lowest index.
template <class PathLossFn>
int serving_bs(Point x, const NetworkTopology& topology, PathLossFn&& path_loss)
{
    int best = 0;
    double best_gain = path_loss(distance(topology.bs[0], x));
    for (std::size_t j = 1; j < topology.bs.size(); ++j) {
        const double gain = path_loss(distance(topology.bs[j], x));
        if (gain > best_gain) {
            best_gain = gain;
            best = static_cast<int>(j);
        }
    }
    return best;
}

// True iff x lies in the reference cell sector (Voronoi cell of the
// reference BS intersected with the beam wedge around sector_offset).
bool in_reference_sector(Point x, const NetworkTopology& topology);

// Poisson-count hard-core placement: candidates uniform over the region are
// rejected while within r_min of an accepted point; the reference BS is
// forced at the origin as the first accepted point. Throws PackingFailure
// once a candidate exhausts retry_budget proposals.
NetworkTopology sample_ucp(double lambda_bs, double r_min, const Region& region,
                           const SectorLayout& layout, int retry_budget, Rng& rng);

// Poisson point process over the region, thinned by the exclusion sector
// (intensity zero inside it). Pass exclusion = nullptr for no thinning.
MobileSet sample_ppp(double lambda, const Region& region, const SectorGeometry* exclusion,
                     int hop_index, Rng& rng);

// Hit-or-miss Monte Carlo estimate of |sector ∩ region|.
Estimate sector_area(const SectorGeometry& sector, const Region& region,
                     std::size_t n_samples, Rng& rng);

} // namespace hopsim
