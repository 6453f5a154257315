#include "hopsim/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

double neumaier_total(const std::vector<double>& values)
{
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

// Mean and standard error of a per-trial sample, reduced in index order.
Estimate reduce_mean(const std::vector<double>& values)
{
    const double n = static_cast<double>(values.size());
    const double mean = neumaier_total(values) / n;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        sq[i] = (values[i] - mean) * (values[i] - mean);
    const double var = values.size() > 1 ? neumaier_total(sq) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

// Rethrows trial-level failures with the trial index attached.
template <class Fn>
auto with_trial_context(std::uint64_t trial, Fn&& fn)
{
    try {
        return fn();
    } catch (const PackingFailure& e) {
        throw PackingFailure("trial " + std::to_string(trial) + ": " + e.what());
    } catch (const NumericalInstability& e) {
        throw NumericalInstability("trial " + std::to_string(trial) + ": " + e.what());
    }
}

} // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> grid(n);
    const double step = (std::log10(hi) - std::log10(lo)) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = std::pow(10.0, std::log10(lo) + step * static_cast<double>(i));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

unsigned SystemConfig::resolved_workers() const
{
    if (workers > 0)
        return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for_indexed(std::uint64_t n, unsigned workers,
                          const std::function<void(std::uint64_t)>& fn,
                          const ProgressFn& progress)
{
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) {
            fn(i);
            if (progress)
                progress(i + 1, n);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> done{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::mutex progress_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
            const std::uint64_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(d, n);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

NetworkTopology trial_topology(const SystemConfig& config, std::uint64_t trial)
{
    Rng rng = derive_stream(config.master_seed, trial, StreamPurpose::topology);
    return sample_ucp(config.lambda_bs, config.r_min, config.bs_region(), config.sector_layout(),
                      config.ucp_retry_budget, rng);
}

InterfererSnapshot trial_snapshot(const SystemConfig& config, std::uint64_t trial)
{
    const NetworkTopology topology = trial_topology(config, trial);
    const SectorGeometry sector = config.sector_geometry(topology);
    const ChannelParams channel = config.channel();
    const AntennaConfig bs_ant = config.bs_antenna();
    const AntennaConfig ms_ant = config.ms_antenna();

    InterfererSnapshot snapshot = InterfererSnapshot::empty(config.hops);
    for (int t = 1; t <= config.hops; ++t) {
        Rng rng = derive_stream(config.master_seed, trial, StreamPurpose::mobiles,
                                static_cast<std::uint64_t>(t));
        const MobileSet mobiles =
            sample_ppp(config.lambda_ms, config.mobile_region(), &sector, t, rng);
        for (const Point& x : mobiles.positions) {
            const double omega = normalized_power(x, topology, bs_ant, ms_ant, channel,
                                                  config.hops, config.eq3_literal);
            if (zone_of(x.norm(), channel) == Zone::los)
                snapshot.omega_los[t - 1].push_back(omega);
            else
                snapshot.omega_nlos[t - 1].push_back(omega);
        }
    }
    return snapshot;
}

OutageResult run_trial(const SystemConfig& config, std::uint64_t trial, double beta)
{
    return with_trial_context(trial, [&] {
        const InterfererSnapshot snapshot = trial_snapshot(config, trial);
        return conditional_outage(snapshot, make_outage_params(config, beta));
    });
}

CurveTable ccdf_conditional_outage(const SystemConfig& config, const std::vector<double>& beta_grid,
                                   double eps_hat, const ProgressFn& progress)
{
    if (beta_grid.empty())
        throw DomainError("ccdf: empty threshold grid");
    if (config.n_trials < 100)
        throw DomainError("ccdf: need at least 100 trials");

    const std::uint64_t n = config.n_trials;
    std::vector<std::uint8_t> below(n * beta_grid.size(), 0);
    parallel_for_indexed(
        n, config.resolved_workers(),
        [&](std::uint64_t trial) {
            with_trial_context(trial, [&] {
                const InterfererSnapshot snapshot = trial_snapshot(config, trial);
                for (std::size_t b = 0; b < beta_grid.size(); ++b) {
                    const OutageResult r =
                        conditional_outage(snapshot, make_outage_params(config, beta_grid[b]));
                    below[trial * beta_grid.size() + b] = r.value < eps_hat ? 1 : 0;
                }
                return 0;
            });
        },
        progress);

    CurveTable table;
    table.x_label = "beta";
    table.y_label = "ccdf";
    for (std::size_t b = 0; b < beta_grid.size(); ++b) {
        std::uint64_t count = 0;
        for (std::uint64_t trial = 0; trial < n; ++trial)
            count += below[trial * beta_grid.size() + b];
        const double y = static_cast<double>(count) / static_cast<double>(n);
        table.rows.push_back(
            {beta_grid[b], y, std::sqrt(y * (1.0 - y) / static_cast<double>(n))});
    }
    return table;
}

std::vector<OutageResult> spatially_averaged_outage_grid(const SystemConfig& config,
                                                         const std::vector<double>& beta_grid,
                                                         AverageMode mode,
                                                         const ProgressFn& progress)
{
    if (beta_grid.empty())
        throw DomainError("spatial average: empty threshold grid");
    if (config.n_trials < 100)
        throw DomainError("spatial average: need at least 100 trials");

    const std::uint64_t n = config.n_trials;
    std::vector<double> values(n * beta_grid.size(), 0.0);
    std::vector<double> errors(n * beta_grid.size(), 0.0);
    parallel_for_indexed(
        n, config.resolved_workers(),
        [&](std::uint64_t trial) {
            with_trial_context(trial, [&] {
                if (mode == AverageMode::full_mc) {
                    const InterfererSnapshot snapshot = trial_snapshot(config, trial);
                    for (std::size_t b = 0; b < beta_grid.size(); ++b)
                        values[trial * beta_grid.size() + b] =
                            conditional_outage(snapshot, make_outage_params(config, beta_grid[b]))
                                .value;
                } else {
                    const NetworkTopology topology = trial_topology(config, trial);
                    if (config.lambda_ms == 0.0) {
                        for (std::size_t b = 0; b < beta_grid.size(); ++b)
                            values[trial * beta_grid.size() + b] =
                                conditional_outage(InterfererSnapshot::empty(config.hops),
                                                   make_outage_params(config, beta_grid[b]))
                                    .value;
                    } else {
                        Rng rng =
                            derive_stream(config.master_seed, trial, StreamPurpose::epsilon_los);
                        const TopologyFunctionals fn = sample_functionals(topology, config, rng);
                        for (std::size_t b = 0; b < beta_grid.size(); ++b) {
                            const OutageResult r = outage_given_bs_from(
                                fn, config, make_outage_params(config, beta_grid[b]));
                            values[trial * beta_grid.size() + b] = r.value;
                            errors[trial * beta_grid.size() + b] = r.std_error;
                        }
                    }
                }
                return 0;
            });
        },
        progress);

    std::vector<OutageResult> out;
    out.reserve(beta_grid.size());
    std::vector<double> column(n);
    for (std::size_t b = 0; b < beta_grid.size(); ++b) {
        for (std::uint64_t trial = 0; trial < n; ++trial)
            column[trial] = values[trial * beta_grid.size() + b];
        const Estimate e = reduce_mean(column);
        out.push_back({e.value, OutageKind::spatially_averaged, e.std_error});
    }
    return out;
}

OutageResult spatially_averaged_outage(const SystemConfig& config, double beta, AverageMode mode)
{
    return spatially_averaged_outage_grid(config, {beta}, mode).front();
}

double rate_from_threshold(double beta, double shannon_loss)
{
    if (!(beta > 0.0))
        throw DomainError("rate_from_threshold: beta must be > 0");
    return std::log2(1.0 + shannon_loss * beta);
}

std::vector<AseEntry> ase_sweep(const SystemConfig& config, const std::vector<double>& lambda_grid,
                                const std::vector<double>& beta_grid, AverageMode mode,
                                const ProgressFn& progress)
{
    if (lambda_grid.empty() || beta_grid.empty())
        throw DomainError("ase_sweep: empty grid");

    // One spatial-average campaign per BS density, thresholds batched.
    std::vector<std::vector<OutageResult>> outage(lambda_grid.size());
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        SystemConfig variant = config;
        variant.lambda_bs = lambda_grid[i];
        variant.validate();
        outage[i] = spatially_averaged_outage_grid(variant, beta_grid, mode, progress);
    }

    std::vector<AseEntry> rows;
    rows.reserve(lambda_grid.size() * beta_grid.size());
    for (std::size_t b = 0; b < beta_grid.size(); ++b) {
        const double rate = rate_from_threshold(beta_grid[b], config.shannon_loss);
        for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
            const OutageResult& r = outage[i][b];
            rows.push_back({lambda_grid[i], beta_grid[b], lambda_grid[i] * rate * (1.0 - r.value),
                            lambda_grid[i] * rate * r.std_error});
        }
    }
    return rows;
}

} // namespace hopsim
