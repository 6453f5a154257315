#include "hopsim/propagation.hpp"

#include <cmath>

#include "hopsim/errors.hpp"

namespace hopsim {

void ChannelParams::validate() const
{
    if (!(d0 > 0.0 && d0 <= r_los))
        throw DomainError("channel: need 0 < d0 <= r_los");
    if (!(r_los < r_nlos))
        throw DomainError("channel: need r_los < r_nlos");
    if (!(alpha_los > 0.0 && alpha_nlos > 0.0))
        throw DomainError("channel: path exponents must be > 0");
    if (m_los < 1 || m_nlos < 1)
        throw DomainError("channel: fading orders must be positive integers");
    if (!(snr > 0.0))
        throw DomainError("channel: snr must be > 0");
}

AntennaConfig upa_params(int n)
{
    if (n < 1)
        throw DomainError("upa_params: element count must be >= 1");
    const int root = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
    if (root * root != n)
        throw DomainError("upa_params: element count must be a perfect square, got " +
                          std::to_string(n));
    const double sqrt_n = static_cast<double>(root);
    const double s = std::sin(3.0 * M_PI / (2.0 * sqrt_n));
    return {n, 2.0 * M_PI / sqrt_n, static_cast<double>(n), 1.0 / (s * s)};
}

double path_loss(double d, const ChannelParams& params)
{
    if (!(d > 0.0))
        throw DomainError("path_loss: distance must be > 0");
    if (d < params.d0)
        d = params.d0; // near-field cap keeps the gain <= 1
    const double alpha = d <= params.r_los ? params.alpha_los : params.alpha_nlos;
    return std::pow(d, -alpha) * std::pow(params.d0, params.alpha_los);
}

Zone zone_of(double d, const ChannelParams& params)
{
    if (d < 0.0)
        throw DomainError("zone_of: distance must be >= 0");
    if (d <= params.r_los)
        return Zone::los;
    if (d <= params.r_nlos)
        return Zone::nlos;
    return Zone::blocked;
}

double receive_gain(double phi, double psi, const AntennaConfig& antenna)
{
    const double off = wrap_angle(phi - psi);
    return std::abs(off) <= antenna.beamwidth / 2.0 ? antenna.mainlobe : antenna.sidelobe;
}

double transmit_gain(Point x, Point serving_pos, const AntennaConfig& antenna, bool eq3_literal)
{
    const Point to_serving = serving_pos - x;
    if (x.norm_sq() == 0.0 || to_serving.norm_sq() == 0.0)
        throw DegenerateGeometry("transmit_gain: undefined direction");
    const double steer = to_serving.azimuth();
    // Default: is the reference BS (at the origin) inside the mobile's beam,
    // which is steered at its serving BS? The literal variant compares the
    // mobile's azimuth seen from the origin instead of the direction to the
    // origin seen from the mobile.
    const double target = eq3_literal ? x.azimuth() : Point{-x.x, -x.y}.azimuth();
    const double off = wrap_angle(target - steer);
    return std::abs(off) <= antenna.beamwidth / 2.0 ? antenna.mainlobe : antenna.sidelobe;
}

int serving_bs_pathlaw(Point x, const NetworkTopology& topology, const ChannelParams& params)
{
    // The law is strictly decreasing within each zone segment, so the argmax
    // is attained at the nearest candidate on either side of r_los.
    const double split_sq = params.r_los * params.r_los;
    int best_near = -1, best_far = -1;
    double d2_near = 0.0, d2_far = 0.0;
    for (std::size_t j = 0; j < topology.bs.size(); ++j) {
        const double d2 = distance_sq(topology.bs[j], x);
        if (d2 <= split_sq) {
            if (best_near < 0 || d2 < d2_near) {
                d2_near = d2;
                best_near = static_cast<int>(j);
            }
        } else {
            if (best_far < 0 || d2 < d2_far) {
                d2_far = d2;
                best_far = static_cast<int>(j);
            }
        }
    }
    if (best_near < 0)
        return best_far;
    if (best_far < 0)
        return best_near;
    const double f_near = path_loss(std::sqrt(d2_near), params);
    const double f_far = path_loss(std::sqrt(d2_far), params);
    if (f_near > f_far)
        return best_near;
    if (f_far > f_near)
        return best_far;
    return std::min(best_near, best_far);
}

} // namespace hopsim
