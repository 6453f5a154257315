#pragma once

#include "hopsim/geometry.hpp"

namespace hopsim {

enum class Zone { los, nlos, blocked };

struct ChannelParams {
    double r_los = 2.0;
    double r_nlos = 10.0;
    double d0 = 0.01;
    double alpha_los = 2.0;
    double alpha_nlos = 4.0;
    int m_los = 3;
    int m_nlos = 1;
    double snr = 0.0; // linear

    void validate() const; // throws DomainError
};

// Two-level beam pattern of a square uniform planar array.
struct AntennaConfig {
    int elements = 1;
    double beamwidth = 2.0 * M_PI; // theta
    double mainlobe = 1.0;         // G
    double sidelobe = 1.0;         // g
};

// Beamwidth 2*pi/sqrt(n), mainlobe gain n, sidelobe gain 1/sin^2(3*pi/(2*sqrt(n))).
// n must be a positive perfect square.
AntennaConfig upa_params(int n);

// Attenuation power law d^{-alpha(d)} / d0^{-alpha(d0)}, normalized so the
// gain is 1 at the reference distance d0. Distances below d0 are clamped to
// d0 (near-field cap); alpha switches from alpha_los to alpha_nlos past
// r_los, which makes the law discontinuous there.
double path_loss(double d, const ChannelParams& params);

// LOS for d <= r_los, NLOS for r_los < d <= r_nlos, blocked beyond.
Zone zone_of(double d, const ChannelParams& params);

// Receive gain of the reference sector beam toward azimuth phi: mainlobe
// when |wrap(phi - psi)| <= theta/2 (boundary inclusive), sidelobe otherwise.
double receive_gain(double phi, double psi, const AntennaConfig& antenna);

// Transmit gain of a mobile at x (beam steered at its serving BS) in the
// direction of the reference BS at the origin. The default compares the
// direction toward the origin with the direction toward the serving BS;
// eq3_literal instead compares the mobile's azimuth as seen from the origin
// with the direction toward the serving BS.
double transmit_gain(Point x, Point serving_pos, const AntennaConfig& antenna,
                     bool eq3_literal = false);

// Serving BS under the attenuation law above. Equivalent to
// serving_bs(x, topology, path_loss) but only evaluates the law at the
// per-zone nearest candidates.
int serving_bs_pathlaw(Point x, const NetworkTopology& topology, const ChannelParams& params);

} // namespace hopsim
