#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hopsim/estimate.hpp"
#include "hopsim/geometry.hpp"
#include "hopsim/propagation.hpp"
#include "hopsim/rng.hpp"
#include "hopsim/system_config.hpp"

namespace hopsim {

// Normalized received powers of the interferers, split per hop into the
// LOS set (no fading) and the NLOS set (gamma-faded).
struct InterfererSnapshot {
    int hops = 1;
    std::vector<std::vector<double>> omega_los;  // [hop][i]
    std::vector<std::vector<double>> omega_nlos; // [hop][i]

    static InterfererSnapshot empty(int hops);
    std::size_t total_count() const;
    void validate() const; // sizes match hops, every power finite and >= 0
};

struct OutageParams {
    double beta = 1.0; // SINR threshold, linear
    int hops = 1;      // L
    int m_los = 1;
    int m_nlos = 1;
    double snr = 1.0;  // linear

    int m_total() const { return m_los * hops; } // M
    double m_tilde() const;                      // (M!)^{-1/M}

    void validate() const;
};

OutageParams make_outage_params(const SystemConfig& config, double beta);

enum class OutageKind { conditional_on_omega, conditional_on_bs, spatially_averaged, oracle };

struct OutageResult {
    double value = 0.0;
    OutageKind kind = OutageKind::conditional_on_omega;
    double std_error = 0.0; // Monte Carlo kinds only
};

// Normalized power of an interferer at x: (1/L) * (a*b)/(G_bs*G_ms) *
// f(|x|)/f(|Y_serving - x|), with a the reference sector's receive gain
// toward x and b the mobile's transmit gain toward the reference BS.
double normalized_power(Point x, const NetworkTopology& topology, const AntennaConfig& bs_antenna,
                        const AntennaConfig& ms_antenna, const ChannelParams& channel, int hops,
                        bool eq3_literal = false);

// Exponential-type lower bound on the CDF of a unit-mean gamma variable with
// integer shape m: (1 - exp(-m * (m!)^{-1/m} * z))^m.
double alzer_cdf(double z, int m);

// Closed-form conditional outage probability for a fixed snapshot, averaged
// over fading via the alternating binomial sum. Deterministic; throws
// NumericalInstability if the tracked summation error cannot be certified.
OutageResult conditional_outage(const InterfererSnapshot& snapshot, const OutageParams& params);

// Brute-force fading oracle: simulates the per-hop SINR with gamma fading
// draws and returns the empirical outage fraction with binomial std error.
OutageResult outage_oracle(const InterfererSnapshot& snapshot, const OutageParams& params,
                           std::size_t n_draws, Rng& rng);

// Mean per-hop LOS interference functional: lambda_ms * |A_los \ A_sec| *
// E_X[omega], estimated with ex_position_draws uniform positions.
Estimate epsilon1(const NetworkTopology& topology, const SystemConfig& config, Rng& rng);

// NLOS probability-generating functional factor for summation index l.
Estimate epsilon2(const NetworkTopology& topology, const SystemConfig& config, int l,
                  const OutageParams& params, Rng& rng);

// Position-averaged single-mobile statistics of one topology, reusable
// across thresholds and summation indices.
struct TopologyFunctionals {
    double area_los = 0.0;  // |A_los|
    double area_nlos = 0.0; // |A_nlos|
    std::vector<double> omega_los;   // masked: 0 inside the excluded sector
    std::vector<double> omega_nlos;  // raw powers
    std::vector<std::uint8_t> nlos_outside_sector;
};

TopologyFunctionals sample_functionals(const NetworkTopology& topology, const SystemConfig& config,
                                       Rng& rng);

Estimate epsilon1_from(const TopologyFunctionals& fn, const SystemConfig& config);
Estimate epsilon2_from(const TopologyFunctionals& fn, const SystemConfig& config, int l,
                       const OutageParams& params);

// Mobile-averaged outage conditioned on the BS topology: the alternating sum
// with exp[-l M Mt beta (1/SNR + L*eps1)] * eps2(l)^L terms.
OutageResult outage_given_bs_from(const TopologyFunctionals& fn, const SystemConfig& config,
                                  const OutageParams& params);
OutageResult outage_given_bs(const NetworkTopology& topology, const SystemConfig& config,
                             const OutageParams& params, Rng& rng);

// Unit-mean fading conventions: the reference link accumulates gamma(m_los)
// hop gains with mean 1/L each, NLOS interferers draw unit-mean gamma(m_nlos).
double draw_reference_hop_fading(Rng& rng, int m_los, int hops);
double draw_interferer_fading(Rng& rng, int m_nlos);

namespace detail {

struct SumAudit {
    double raw = 0.0;          // unclamped alternating-sum value
    double err_estimate = 0.0; // absolute error bound from the tracked arithmetic
};

// p = sum_{l=0}^{M} C(M,l) (-1)^l exp(-l*E + log_factor(l)), accumulated in
// fixed ascending l with compensated extended-precision arithmetic.
// log_factor(0) must be 0 and log_factor(l) <= 0; log_factor_rel_err bounds
// the rounding error of one log_factor evaluation relative to its magnitude.
SumAudit alternating_outage_sum(int m_total, double exponent_unit,
                                const std::function<double(int)>& log_factor,
                                double log_factor_rel_err = 0.0);

// Forced binomial-sum evaluation (no direct-form shortcut); used to check
// the algebraic identity against the compact no-NLOS expression.
SumAudit conditional_outage_sum_path(const InterfererSnapshot& snapshot,
                                     const OutageParams& params);

// Compact no-NLOS form (1 - exp(-E))^M.
double no_nlos_direct(double exponent_unit, int m_total);

} // namespace detail

} // namespace hopsim
