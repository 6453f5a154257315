#include "hopsim/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

constexpr double kEps64 = std::numeric_limits<double>::epsilon();
constexpr long double kEps80 = std::numeric_limits<long double>::epsilon();
// Certification thresholds for the alternating sum: relative 1e-9 with an
// absolute significance floor well below anything the campaigns consume.
// The floor must clear the extended-precision roundoff ceiling of the
// largest supported sum (about 1.5e-9 at M = 24 near x ~ 0.8).
constexpr double kRelTol = 1e-9;
constexpr double kAbsFloor = 1e-8;
constexpr int kMaxM = 24; // supported m_los * L grid for the closed form

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

std::vector<double> sorted_flat(const std::vector<std::vector<double>>& per_hop)
{
    std::vector<double> flat;
    for (const auto& hop : per_hop)
        flat.insert(flat.end(), hop.begin(), hop.end());
    std::sort(flat.begin(), flat.end());
    return flat;
}

double sum_sorted(const std::vector<double>& v)
{
    double acc = 0.0;
    for (double x : v)
        acc += x;
    return acc;
}

// (1 + c*omega)^{-m} and its complement, written to stay accurate when
// c*omega is tiny.
double one_minus_mgf_factor(double c_omega, int m)
{
    if (m == 1)
        return c_omega / (1.0 + c_omega);
    return -std::expm1(-static_cast<double>(m) * std::log1p(c_omega / m));
}

struct Welford {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double std_error() const
    {
        if (n < 2)
            return 0.0;
        return std::sqrt(m2 / (static_cast<double>(n) - 1.0) / static_cast<double>(n));
    }
};

// Masked LOS powers: 0 for draws inside the excluded sector.
std::vector<double> sample_los_omegas(const NetworkTopology& topology, const SystemConfig& config,
                                      Rng& rng)
{
    const auto channel = config.channel();
    const auto bs_ant = config.bs_antenna();
    const auto ms_ant = config.ms_antenna();
    const auto sector = config.sector_geometry(topology);
    const Region region = config.los_region();
    std::vector<double> omegas(config.ex_position_draws, 0.0);
    for (auto& w : omegas) {
        const Point p = sample_point_in_region(region, rng);
        if (!sector.contains(p))
            w = normalized_power(p, topology, bs_ant, ms_ant, channel, config.hops,
                                 config.eq3_literal);
    }
    return omegas;
}

void sample_nlos_omegas(const NetworkTopology& topology, const SystemConfig& config, Rng& rng,
                        std::vector<double>& omegas, std::vector<std::uint8_t>& outside)
{
    const auto channel = config.channel();
    const auto bs_ant = config.bs_antenna();
    const auto ms_ant = config.ms_antenna();
    const auto sector = config.sector_geometry(topology);
    const Region region = config.nlos_region();
    omegas.resize(config.ex_position_draws);
    outside.resize(config.ex_position_draws);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const Point p = sample_point_in_region(region, rng);
        omegas[i] = normalized_power(p, topology, bs_ant, ms_ant, channel, config.hops,
                                     config.eq3_literal);
        outside[i] = sector.contains(p) ? 0 : 1;
    }
}

} // namespace

InterfererSnapshot InterfererSnapshot::empty(int hops)
{
    InterfererSnapshot s;
    s.hops = hops;
    s.omega_los.resize(hops);
    s.omega_nlos.resize(hops);
    return s;
}

std::size_t InterfererSnapshot::total_count() const
{
    std::size_t n = 0;
    for (const auto& hop : omega_los)
        n += hop.size();
    for (const auto& hop : omega_nlos)
        n += hop.size();
    return n;
}

void InterfererSnapshot::validate() const
{
    if (hops < 1)
        throw DomainError("snapshot: hops must be >= 1");
    if (omega_los.size() != static_cast<std::size_t>(hops) ||
        omega_nlos.size() != static_cast<std::size_t>(hops))
        throw DomainError("snapshot: per-hop lists must match the hop count");
    for (const auto& lists : {&omega_los, &omega_nlos})
        for (const auto& hop : *lists)
            for (double w : hop)
                if (!(w >= 0.0) || !std::isfinite(w))
                    throw DomainError("snapshot: powers must be finite and >= 0");
}

double OutageParams::m_tilde() const
{
    const double m = static_cast<double>(m_total());
    return std::exp(-std::lgamma(m + 1.0) / m);
}

void OutageParams::validate() const
{
    if (!(beta > 0.0))
        throw DomainError("outage params: beta must be > 0");
    if (hops < 1 || m_los < 1 || m_nlos < 1)
        throw DomainError("outage params: hops and fading orders must be positive integers");
    if (!(snr > 0.0))
        throw DomainError("outage params: snr must be > 0");
}

OutageParams make_outage_params(const SystemConfig& config, double beta)
{
    return {beta, config.hops, config.m_los, config.m_nlos, config.snr_linear()};
}

double normalized_power(Point x, const NetworkTopology& topology, const AntennaConfig& bs_antenna,
                        const AntennaConfig& ms_antenna, const ChannelParams& channel, int hops,
                        bool eq3_literal)
{
    if (topology.bs.empty())
        throw DomainError("normalized_power: empty topology");
    const double d_ref = x.norm();
    if (d_ref > channel.r_nlos)
        throw DomainError("normalized_power: position beyond the faded zone");
    const int serving = serving_bs_pathlaw(x, topology, channel);
    const double b = transmit_gain(x, topology.bs[serving], ms_antenna, eq3_literal);
    const double a = receive_gain(x.azimuth(), topology.sector_offset, bs_antenna);
    const double f_ref = path_loss(d_ref, channel);
    const double f_srv = path_loss(distance(x, topology.bs[serving]), channel);
    return (a * b) / (bs_antenna.mainlobe * ms_antenna.mainlobe) * (f_ref / f_srv) /
           static_cast<double>(hops);
}

double alzer_cdf(double z, int m)
{
    if (z < 0.0)
        throw DomainError("alzer_cdf: z must be >= 0");
    if (m < 1)
        throw DomainError("alzer_cdf: m must be a positive integer");
    const double md = static_cast<double>(m);
    const double c = std::exp(-std::lgamma(md + 1.0) / md);
    return std::pow(-std::expm1(-md * c * z), md);
}

namespace detail {

SumAudit alternating_outage_sum(int m_total, double exponent_unit,
                                const std::function<double(int)>& log_factor,
                                double log_factor_rel_err)
{
    // Exact binomial coefficients (max C(24,12) fits comfortably in 64 bits).
    std::uint64_t binom = 1;
    long double sum = 0.0L;
    long double comp = 0.0L;
    long double abs_sum = 0.0L;
    double weighted_arg_err = 0.0;
    for (int l = 0; l <= m_total; ++l) {
        if (l > 0)
            binom = binom * static_cast<std::uint64_t>(m_total - l + 1) /
                    static_cast<std::uint64_t>(l);
        const double lf = l == 0 ? 0.0 : log_factor(l);
        const double arg = -static_cast<double>(l) * exponent_unit + lf;
        long double term = static_cast<long double>(binom) * expl(static_cast<long double>(arg));
        if (l % 2 == 1)
            term = -term;
        const long double t = sum + term;
        if (fabsl(sum) >= fabsl(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
        abs_sum += fabsl(term);
        // Rounding of the double-precision exponent perturbs each term
        // relatively by about the exponent's own accumulated error; the
        // |term| weighting keeps the bound finite (x * exp(-x) <= 1/e).
        const double arg_err =
            kEps64 * 2.0 * std::abs(static_cast<double>(l) * exponent_unit) +
            log_factor_rel_err * std::abs(lf);
        weighted_arg_err += static_cast<double>(fabsl(term)) * arg_err;
    }
    SumAudit audit;
    audit.raw = static_cast<double>(sum + comp);
    audit.err_estimate =
        weighted_arg_err + static_cast<double>(abs_sum * 4.0L * kEps80);
    return audit;
}

double no_nlos_direct(double exponent_unit, int m_total)
{
    return std::pow(-std::expm1(-exponent_unit), m_total);
}

SumAudit conditional_outage_sum_path(const InterfererSnapshot& snapshot,
                                     const OutageParams& params)
{
    snapshot.validate();
    params.validate();
    if (snapshot.hops != params.hops)
        throw DomainError("conditional_outage: snapshot/params hop mismatch");
    const int m_total = params.m_total();
    if (m_total > kMaxM)
        throw DomainError("conditional_outage: m_los * hops must be <= " + std::to_string(kMaxM));

    const double m_tilde = params.m_tilde();
    const std::vector<double> los = sorted_flat(snapshot.omega_los);
    const std::vector<double> nlos = sorted_flat(snapshot.omega_nlos);
    const double exponent_unit =
        m_total * m_tilde * params.beta * (1.0 / params.snr + sum_sorted(los));

    if (nlos.empty())
        return alternating_outage_sum(m_total, exponent_unit, [](int) { return 0.0; }, 0.0);

    const double coeff = m_total * m_tilde * params.beta / params.m_nlos;
    const double m_nlos = params.m_nlos;
    const auto log_factor = [&](int l) {
        // Compensated accumulation keeps the phase error at a few ulps of
        // its magnitude independent of the interferer count.
        double phi = 0.0, comp = 0.0;
        for (double w : nlos) {
            const double term = std::log1p(static_cast<double>(l) * coeff * w);
            const double t = phi + term;
            comp += phi >= term ? (phi - t) + term : (term - t) + phi;
            phi = t;
        }
        return -m_nlos * (phi + comp);
    };
    return alternating_outage_sum(m_total, exponent_unit, log_factor, kEps64 * 6.0);
}

} // namespace detail

OutageResult conditional_outage(const InterfererSnapshot& snapshot, const OutageParams& params)
{
    snapshot.validate();
    params.validate();
    if (snapshot.hops != params.hops)
        throw DomainError("conditional_outage: snapshot/params hop mismatch");
    const int m_total = params.m_total();
    if (m_total > kMaxM)
        throw DomainError("conditional_outage: m_los * hops must be <= " + std::to_string(kMaxM));

    bool has_nlos = false;
    for (const auto& hop : snapshot.omega_nlos)
        has_nlos = has_nlos || !hop.empty();

    const detail::SumAudit audit = detail::conditional_outage_sum_path(snapshot, params);

    if (!has_nlos) {
        // The compact form is exact here; the sum path serves as the
        // instability guard for the shared machinery.
        const std::vector<double> los = sorted_flat(snapshot.omega_los);
        const double exponent_unit =
            m_total * params.m_tilde() * params.beta * (1.0 / params.snr + sum_sorted(los));
        const double direct = detail::no_nlos_direct(exponent_unit, m_total);
        if (std::abs(audit.raw - direct) >
            std::max(kRelTol * direct, kAbsFloor) + audit.err_estimate)
            throw NumericalInstability(
                "conditional_outage: binomial sum disagrees with the compact form (sum " +
                sci(audit.raw) + ", direct " + sci(direct) + ")");
        return {direct, OutageKind::conditional_on_omega, 0.0};
    }

    if (audit.err_estimate > std::max(kRelTol * std::abs(audit.raw), kAbsFloor))
        throw NumericalInstability("conditional_outage: summation error estimate " +
                                   sci(audit.err_estimate) +
                                   " exceeds tolerance for value " + sci(audit.raw));
    return {std::clamp(audit.raw, 0.0, 1.0), OutageKind::conditional_on_omega, 0.0};
}

double draw_reference_hop_fading(Rng& rng, int m_los, int hops)
{
    return rng.gamma_int(m_los) / (static_cast<double>(m_los) * static_cast<double>(hops));
}

double draw_interferer_fading(Rng& rng, int m_nlos)
{
    return rng.gamma_int(m_nlos) / static_cast<double>(m_nlos);
}

OutageResult outage_oracle(const InterfererSnapshot& snapshot, const OutageParams& params,
                           std::size_t n_draws, Rng& rng)
{
    snapshot.validate();
    params.validate();
    if (snapshot.hops != params.hops)
        throw DomainError("outage_oracle: snapshot/params hop mismatch");
    if (n_draws < 10000)
        throw DomainError("outage_oracle: need at least 1e4 draws");

    std::vector<double> los_per_hop(params.hops, 0.0);
    for (int t = 0; t < params.hops; ++t)
        los_per_hop[t] = sum_sorted(snapshot.omega_los[t]);

    const double inv_snr = 1.0 / params.snr;
    std::size_t outages = 0;
    for (std::size_t k = 0; k < n_draws; ++k) {
        double numerator = 0.0;
        double denominator = inv_snr;
        for (int t = 0; t < params.hops; ++t) {
            numerator += draw_reference_hop_fading(rng, params.m_los, params.hops);
            denominator += los_per_hop[t];
            for (double w : snapshot.omega_nlos[t])
                denominator += draw_interferer_fading(rng, params.m_nlos) * w;
        }
        if (numerator < params.beta * denominator)
            ++outages;
    }
    const double p = static_cast<double>(outages) / static_cast<double>(n_draws);
    return {p, OutageKind::oracle, std::sqrt(p * (1.0 - p) / static_cast<double>(n_draws))};
}

TopologyFunctionals sample_functionals(const NetworkTopology& topology, const SystemConfig& config,
                                       Rng& rng)
{
    TopologyFunctionals fn;
    fn.area_los = config.los_region().area();
    fn.area_nlos = config.nlos_region().area();
    fn.omega_los = sample_los_omegas(topology, config, rng);
    sample_nlos_omegas(topology, config, rng, fn.omega_nlos, fn.nlos_outside_sector);
    return fn;
}

Estimate epsilon1_from(const TopologyFunctionals& fn, const SystemConfig& config)
{
    if (config.lambda_ms == 0.0)
        return {0.0, 0.0};
    Welford w;
    for (double omega : fn.omega_los)
        w.add(omega);
    const double scale = config.lambda_ms * fn.area_los;
    return {scale * w.mean, scale * w.std_error()};
}

Estimate epsilon2_from(const TopologyFunctionals& fn, const SystemConfig& config, int l,
                       const OutageParams& params)
{
    const int m_total = params.m_total();
    if (l < 1 || l > m_total)
        throw DomainError("epsilon2: need 1 <= l <= m_los * hops");
    if (config.lambda_ms == 0.0)
        return {1.0, 0.0};
    const double coeff = l * params.m_tilde() * m_total * params.beta / params.m_nlos;
    Welford w;
    for (std::size_t i = 0; i < fn.omega_nlos.size(); ++i) {
        const bool counted = !config.a2_excludes_sector || fn.nlos_outside_sector[i];
        w.add(counted ? one_minus_mgf_factor(coeff * fn.omega_nlos[i], params.m_nlos) : 0.0);
    }
    const double scale = config.lambda_ms * fn.area_nlos;
    const double value = std::exp(-scale * w.mean);
    return {value, value * scale * w.std_error()};
}

Estimate epsilon1(const NetworkTopology& topology, const SystemConfig& config, Rng& rng)
{
    if (config.lambda_ms == 0.0)
        return {0.0, 0.0};
    TopologyFunctionals fn;
    fn.area_los = config.los_region().area();
    fn.omega_los = sample_los_omegas(topology, config, rng);
    return epsilon1_from(fn, config);
}

Estimate epsilon2(const NetworkTopology& topology, const SystemConfig& config, int l,
                  const OutageParams& params, Rng& rng)
{
    const int m_total = params.m_total();
    if (l < 1 || l > m_total)
        throw DomainError("epsilon2: need 1 <= l <= m_los * hops");
    if (config.lambda_ms == 0.0)
        return {1.0, 0.0};
    TopologyFunctionals fn;
    fn.area_nlos = config.nlos_region().area();
    sample_nlos_omegas(topology, config, rng, fn.omega_nlos, fn.nlos_outside_sector);
    return epsilon2_from(fn, config, l, params);
}

namespace {

// Mean of (1 - (1+c*omega)^{-m}) over the stored NLOS draws, with its
// standard error; feeds the log-domain eps2(l)^L factor directly.
Estimate nlos_mean_complement(const TopologyFunctionals& fn, const SystemConfig& config,
                              double coeff, int m_nlos)
{
    Welford w;
    for (std::size_t i = 0; i < fn.omega_nlos.size(); ++i) {
        const bool counted = !config.a2_excludes_sector || fn.nlos_outside_sector[i];
        w.add(counted ? one_minus_mgf_factor(coeff * fn.omega_nlos[i], m_nlos) : 0.0);
    }
    return {w.mean, w.std_error()};
}

double given_bs_sum(const SystemConfig& config, const OutageParams& params, double eps1,
                    const std::vector<Estimate>& u, double u_shift, const char* what)
{
    const int m_total = params.m_total();
    const double m_tilde = params.m_tilde();
    const double hops = static_cast<double>(config.hops);
    const double nlos_scale = config.lambda_ms * config.nlos_region().area();
    const double exponent_unit =
        m_total * m_tilde * params.beta * (1.0 / params.snr + hops * eps1);
    const auto log_factor = [&](int l) {
        const Estimate& e = u[static_cast<std::size_t>(l) - 1];
        return -hops * nlos_scale * std::max(e.value + u_shift * e.std_error, 0.0);
    };
    const detail::SumAudit audit =
        detail::alternating_outage_sum(m_total, exponent_unit, log_factor, kEps64 * 16.0);
    if (audit.err_estimate > std::max(kRelTol * std::abs(audit.raw), kAbsFloor))
        throw NumericalInstability(std::string(what) + ": summation error estimate " +
                                   sci(audit.err_estimate) + " exceeds tolerance for value " +
                                   sci(audit.raw));
    return std::clamp(audit.raw, 0.0, 1.0);
}

} // namespace

OutageResult outage_given_bs_from(const TopologyFunctionals& fn, const SystemConfig& config,
                                  const OutageParams& params)
{
    params.validate();
    const int m_total = params.m_total();
    if (m_total > kMaxM)
        throw DomainError("outage_given_bs: m_los * hops must be <= " + std::to_string(kMaxM));

    const Estimate e1 = epsilon1_from(fn, config);
    std::vector<Estimate> u(static_cast<std::size_t>(m_total));
    if (config.lambda_ms > 0.0) {
        for (int l = 1; l <= m_total; ++l) {
            const double coeff = l * params.m_tilde() * m_total * params.beta / params.m_nlos;
            u[static_cast<std::size_t>(l) - 1] =
                nlos_mean_complement(fn, config, coeff, params.m_nlos);
        }
    }

    const double p = given_bs_sum(config, params, e1.value, u, 0.0, "outage_given_bs");
    // First-order error bars from the two estimator uncertainties.
    const double p_eps1 =
        given_bs_sum(config, params, e1.value + e1.std_error, u, 0.0, "outage_given_bs");
    const double p_eps2 = given_bs_sum(config, params, e1.value, u, 1.0, "outage_given_bs");
    const double se = std::hypot(p_eps1 - p, p_eps2 - p);
    return {p, OutageKind::conditional_on_bs, se};
}

OutageResult outage_given_bs(const NetworkTopology& topology, const SystemConfig& config,
                             const OutageParams& params, Rng& rng)
{
    if (config.lambda_ms == 0.0) {
        // No interference: collapses to the interference-free closed form.
        InterfererSnapshot empty = InterfererSnapshot::empty(config.hops);
        OutageResult r = conditional_outage(empty, params);
        return {r.value, OutageKind::conditional_on_bs, 0.0};
    }
    return outage_given_bs_from(sample_functionals(topology, config, rng), config, params);
}

} // namespace hopsim
