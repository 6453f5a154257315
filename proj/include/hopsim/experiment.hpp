#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hopsim/outage.hpp"
#include "hopsim/system_config.hpp"

namespace hopsim {

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
    double std_error = 0.0;
};

struct CurveTable {
    std::string x_label;
    std::string y_label;
    std::vector<CurvePoint> rows; // x strictly increasing
};

enum class AverageMode { full_mc, semi_analytic };

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total)>;

// Logarithmically spaced grid, inclusive of both endpoints.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// One network trial: a hard-core BS topology plus L independent mobile
// snapshots, all streams derived from (master_seed, trial_index).
NetworkTopology trial_topology(const SystemConfig& config, std::uint64_t trial);
InterfererSnapshot trial_snapshot(const SystemConfig& config, std::uint64_t trial);

// Conditional outage of one trial at threshold beta. Deterministic for a
// fixed (config, trial, beta); errors carry the trial index.
OutageResult run_trial(const SystemConfig& config, std::uint64_t trial, double beta);

// Fraction of trials whose conditional outage is below the constraint, per
// threshold: P[p_cond < eps_hat] with binomial std errors.
CurveTable ccdf_conditional_outage(const SystemConfig& config, const std::vector<double>& beta_grid,
                                   double eps_hat, const ProgressFn& progress = {});

// Spatially averaged outage. full_mc averages the per-trial conditional
// outage; semi_analytic averages the mobile-averaged closed form over
// sampled topologies. The grid variant shares trial snapshots across
// thresholds; the scalar variant is the single-threshold convenience.
std::vector<OutageResult> spatially_averaged_outage_grid(const SystemConfig& config,
                                                         const std::vector<double>& beta_grid,
                                                         AverageMode mode,
                                                         const ProgressFn& progress = {});
OutageResult spatially_averaged_outage(const SystemConfig& config, double beta, AverageMode mode);

// Highest code rate supported at SINR threshold beta under the penalized
// Shannon bound: log2(1 + loss * beta).
double rate_from_threshold(double beta, double shannon_loss = 0.794);

struct AseEntry {
    double lambda_bs = 0.0;
    double beta = 0.0;
    double ase = 0.0;
    double std_error = 0.0;
};

// Area spectral efficiency lambda_bs * R(beta) * (1 - p_o) over the BS
// density grid; one curve per threshold. Rows are ordered by (beta, lambda).
std::vector<AseEntry> ase_sweep(const SystemConfig& config, const std::vector<double>& lambda_grid,
                                const std::vector<double>& beta_grid,
                                AverageMode mode = AverageMode::semi_analytic,
                                const ProgressFn& progress = {});

// Maps fn over [0, n) on a pool of `workers` threads. Output ordering is the
// caller's responsibility (write to preallocated slots by index).
void parallel_for_indexed(std::uint64_t n, unsigned workers,
                          const std::function<void(std::uint64_t)>& fn,
                          const ProgressFn& progress = {});

} // namespace hopsim
