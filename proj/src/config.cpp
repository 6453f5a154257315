#include "hopsim/config.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t idx = 0;
        const double v = std::stod(value, &idx);
        if (idx != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value)
{
    try {
        std::size_t idx = 0;
        if (!value.empty() && value[0] == '-')
            throw std::invalid_argument(value);
        const std::uint64_t v = std::stoull(value, &idx);
        if (idx != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + value +
                          "'");
    }
}

int parse_int(const std::string& key, const std::string& value)
{
    const std::uint64_t v = parse_u64(key, value);
    if (v > 1000000000ull)
        throw ConfigError("key '" + key + "': value out of range");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
}

void assign(SystemConfig& c, const std::string& key, const std::string& value)
{
    if (key == "r_nlos")
        c.r_nlos = parse_double(key, value);
    else if (key == "r_los")
        c.r_los = parse_double(key, value);
    else if (key == "r_min")
        c.r_min = parse_double(key, value);
    else if (key == "lambda_bs")
        c.lambda_bs = parse_double(key, value);
    else if (key == "lambda_ms")
        c.lambda_ms = parse_double(key, value);
    else if (key == "alpha_los")
        c.alpha_los = parse_double(key, value);
    else if (key == "alpha_nlos")
        c.alpha_nlos = parse_double(key, value);
    else if (key == "m_los")
        c.m_los = parse_int(key, value);
    else if (key == "m_nlos")
        c.m_nlos = parse_int(key, value);
    else if (key == "d0")
        c.d0 = parse_double(key, value);
    else if (key == "snr_db")
        c.snr_db = parse_double(key, value);
    else if (key == "n_bs_elements")
        c.n_bs_elements = parse_int(key, value);
    else if (key == "n_ms_elements")
        c.n_ms_elements = parse_int(key, value);
    else if (key == "hops")
        c.hops = parse_int(key, value);
    else if (key == "outage_constraint")
        c.outage_constraint = parse_double(key, value);
    else if (key == "n_trials")
        c.n_trials = parse_u64(key, value);
    else if (key == "bs_region_margin")
        c.bs_region_margin = parse_double(key, value);
    else if (key == "sector_model") {
        if (value == "voronoi_wedge")
            c.sector_model = SectorModel::voronoi_wedge;
        else if (value == "disc_wedge")
            c.sector_model = SectorModel::disc_wedge;
        else
            throw ConfigError("key 'sector_model': expected voronoi_wedge or disc_wedge, got '" +
                              value + "'");
    } else if (key == "psi")
        c.psi = parse_double(key, value);
    else if (key == "sector_area_samples")
        c.sector_area_samples = parse_u64(key, value);
    else if (key == "ex_position_draws")
        c.ex_position_draws = parse_u64(key, value);
    else if (key == "oracle_draws")
        c.oracle_draws = parse_u64(key, value);
    else if (key == "master_seed")
        c.master_seed = parse_u64(key, value);
    else if (key == "eq3_literal")
        c.eq3_literal = parse_bool(key, value);
    else if (key == "ucp_retry_budget")
        c.ucp_retry_budget = parse_int(key, value);
    else if (key == "shannon_loss")
        c.shannon_loss = parse_double(key, value);
    else if (key == "a2_excludes_sector")
        c.a2_excludes_sector = parse_bool(key, value);
    else if (key == "workers")
        c.workers = static_cast<unsigned>(parse_u64(key, value));
    else
        throw ConfigError("unknown key '" + key + "'");
}

} // namespace

void apply_override(SystemConfig& config, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.empty() || value.empty())
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    assign(config, key, value);
}

void SystemConfig::validate() const
{
    const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(d0 > 0.0))
        fail("key 'd0': must be > 0");
    if (!(d0 <= r_los))
        fail("key 'd0': must be <= r_los");
    if (!(r_los < r_nlos))
        fail("key 'r_los': must be < r_nlos");
    if (!(alpha_los > 0.0) || !(alpha_nlos > 0.0))
        fail("key 'alpha_los'/'alpha_nlos': path exponents must be > 0");
    if (m_los < 1)
        fail("key 'm_los': must be a positive integer");
    if (m_nlos < 1)
        fail("key 'm_nlos': must be a positive integer");
    if (hops < 1)
        fail("key 'hops': must be a positive integer");
    if (m_los * hops > 24)
        fail("key 'm_los'/'hops': m_los * hops must be <= 24");
    if (!(lambda_bs > 0.0))
        fail("key 'lambda_bs': must be > 0");
    if (lambda_ms < 0.0)
        fail("key 'lambda_ms': must be >= 0");
    if (r_min < 0.0)
        fail("key 'r_min': must be >= 0");
    if (resolved_margin() < 0.0)
        fail("key 'bs_region_margin': must be >= 0");
    if (!(outage_constraint > 0.0 && outage_constraint < 1.0))
        fail("key 'outage_constraint': must be in (0, 1)");
    if (n_trials < 1)
        fail("key 'n_trials': must be >= 1");
    if (sector_area_samples < 100000)
        fail("key 'sector_area_samples': must be >= 100000");
    if (ex_position_draws < 10000)
        fail("key 'ex_position_draws': must be >= 10000");
    if (oracle_draws < 10000)
        fail("key 'oracle_draws': must be >= 10000");
    if (ucp_retry_budget < 1)
        fail("key 'ucp_retry_budget': must be >= 1");
    if (!(shannon_loss > 0.0))
        fail("key 'shannon_loss': must be > 0");
    if (!(psi >= 0.0 && psi < 2.0 * M_PI))
        fail("key 'psi': must lie in [0, 2*pi)");
    for (const auto& [key, n] :
         {std::pair<const char*, int>{"n_bs_elements", n_bs_elements},
          std::pair<const char*, int>{"n_ms_elements", n_ms_elements}}) {
        try {
            upa_params(n);
        } catch (const DomainError& e) {
            fail(std::string("key '") + key + "': " + e.what());
        }
    }
}

SystemConfig parse_config(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides)
{
    SystemConfig config;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path.string() + "'");
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;
            try {
                apply_override(config, line);
            } catch (const ConfigError& e) {
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
    for (const auto& assignment : overrides)
        apply_override(config, assignment);

    // Canonicalize the beam offset into [0, 2*pi).
    config.psi = std::fmod(config.psi, 2.0 * M_PI);
    if (config.psi < 0.0)
        config.psi += 2.0 * M_PI;

    config.validate();
    return config;
}

} // namespace hopsim
