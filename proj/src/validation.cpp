#include "hopsim/validation.hpp"

#include <cmath>

#include "hopsim/outage.hpp"
#include "hopsim/rng.hpp"

namespace hopsim {

namespace {

// Draws a snapshot spanning the realistic envelope: up to 20 interferers
// spread over the hops, each LOS with probability 0.35, normalized powers
// log-uniform over six decades up to the per-hop ceiling 1/L.
InterfererSnapshot random_snapshot(Rng& rng, int hops, std::size_t max_interferers)
{
    InterfererSnapshot snapshot = InterfererSnapshot::empty(hops);
    const std::size_t count = rng.uniform_index(max_interferers + 1);
    for (std::size_t i = 0; i < count; ++i) {
        const int hop = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(hops)));
        const double omega =
            std::pow(10.0, rng.uniform(-6.0, 0.0)) / static_cast<double>(hops);
        if (rng.uniform01() < 0.35)
            snapshot.omega_los[hop].push_back(omega);
        else
            snapshot.omega_nlos[hop].push_back(omega);
    }
    return snapshot;
}

} // namespace

std::vector<ValidationOutcome> run_validation(const SystemConfig& config, std::size_t n_cases,
                                              std::uint64_t seed, std::size_t oracle_draws)
{
    static constexpr int kMLosChoices[] = {1, 3};
    static constexpr int kHopChoices[] = {1, 2, 4};

    std::vector<ValidationOutcome> outcomes(n_cases);
    for (std::size_t i = 0; i < n_cases; ++i) {
        Rng rng = derive_stream(seed, i, StreamPurpose::validation_case);
        ValidationOutcome& out = outcomes[i];
        out.index = i;
        out.m_los = kMLosChoices[rng.uniform_index(2)];
        out.hops = kHopChoices[rng.uniform_index(3)];
        out.beta = std::pow(10.0, rng.uniform(-1.0, 1.0));

        const InterfererSnapshot snapshot = random_snapshot(rng, out.hops, 20);
        for (const auto& hop : snapshot.omega_los)
            out.n_los += hop.size();
        for (const auto& hop : snapshot.omega_nlos)
            out.n_nlos += hop.size();

        OutageParams params{out.beta, out.hops, out.m_los, config.m_nlos, config.snr_linear()};
        out.closed_form = conditional_outage(snapshot, params).value;

        Rng oracle_rng = derive_stream(seed, i, StreamPurpose::oracle);
        const OutageResult oracle = outage_oracle(snapshot, params, oracle_draws, oracle_rng);
        out.oracle = oracle.value;
        out.oracle_std_error = oracle.std_error;
        out.abs_diff = std::abs(out.closed_form - out.oracle);
        out.tolerance = std::max(0.01, 4.0 * oracle.std_error);
        out.pass = out.abs_diff <= out.tolerance;
    }
    return outcomes;
}

} // namespace hopsim
