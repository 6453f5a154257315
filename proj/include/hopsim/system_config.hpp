#pragma once

#include <cstdint>
#include <string>

#include "hopsim/geometry.hpp"
#include "hopsim/propagation.hpp"

namespace hopsim {

// Every run-time knob of the simulator. Defaults reproduce the canonical
// parameter set; parse_config() overlays a flat key=value file and CLI
// overrides, then validate() enforces the cross-field constraints.
struct SystemConfig {
    // Scenario parameters.
    double r_nlos = 10.0;           // faded zone outer radius
    double r_los = 2.0;             // LOS zone radius
    double r_min = 1.0;             // BS exclusion radius
    double lambda_bs = 0.2;         // BS intensity
    double lambda_ms = 1.0;         // mobile intensity
    double alpha_los = 2.0;         // LOS path exponent
    double alpha_nlos = 4.0;        // NLOS path exponent
    int m_los = 3;                  // reference-link Nakagami factor
    int m_nlos = 1;                 // NLOS interferer Nakagami factor
    double d0 = 0.01;               // reference distance
    double snr_db = 25.0;           // signal-to-noise ratio, dB
    int n_bs_elements = 256;        // UPA elements at each BS
    int n_ms_elements = 16;         // UPA elements at each mobile
    int hops = 2;                   // frequency hops per codeword (L)
    double outage_constraint = 0.1; // CCDF threshold
    std::uint64_t n_trials = 10000; // network trials per campaign

    // Artifact knobs.
    double bs_region_margin = -1.0;       // <0 resolves to 2*r_min
    SectorModel sector_model = SectorModel::voronoi_wedge;
    double psi = 0.0;                     // reference sector beam offset
    std::uint64_t sector_area_samples = 100000;
    std::uint64_t ex_position_draws = 10000; // draws for the single-mobile averages
    std::uint64_t oracle_draws = 100000;     // fading draws for validation
    std::uint64_t master_seed = 1;
    bool eq3_literal = false;             // literal transmit-gain angle convention
    int ucp_retry_budget = 1000;          // proposals per point before PackingFailure
    double shannon_loss = 0.794;          // rate-law SNR penalty factor
    bool a2_excludes_sector = true;       // NLOS average region excludes the sector
    unsigned workers = 0;                 // 0 = hardware concurrency

    double snr_linear() const { return std::pow(10.0, snr_db / 10.0); }
    double resolved_margin() const { return bs_region_margin < 0 ? 2.0 * r_min : bs_region_margin; }

    Region bs_region() const { return {0.0, r_nlos + resolved_margin()}; }
    Region mobile_region() const { return {0.0, r_nlos}; }
    Region los_region() const { return {0.0, r_los}; }
    Region nlos_region() const { return {r_los, r_nlos}; }

    ChannelParams channel() const
    {
        return {r_los, r_nlos, d0, alpha_los, alpha_nlos, m_los, m_nlos, snr_linear()};
    }

    AntennaConfig bs_antenna() const { return upa_params(n_bs_elements); }
    AntennaConfig ms_antenna() const { return upa_params(n_ms_elements); }

    SectorLayout sector_layout() const
    {
        const double theta = upa_params(n_bs_elements).beamwidth;
        return {psi, static_cast<int>(std::lround(2.0 * M_PI / theta))};
    }

    SectorGeometry sector_geometry(const NetworkTopology& topology) const
    {
        return {&topology, sector_model, r_los};
    }

    unsigned resolved_workers() const;

    void validate() const; // throws ConfigError with the offending key
};

} // namespace hopsim
