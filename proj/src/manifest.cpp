#include "hopsim/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "hopsim/errors.hpp"

namespace hopsim {

namespace {

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string iso8601_now()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::map<std::string, std::string> config_to_kv(const SystemConfig& c)
{
    std::map<std::string, std::string> kv;
    kv["r_nlos"] = fmt_double(c.r_nlos);
    kv["r_los"] = fmt_double(c.r_los);
    kv["r_min"] = fmt_double(c.r_min);
    kv["lambda_bs"] = fmt_double(c.lambda_bs);
    kv["lambda_ms"] = fmt_double(c.lambda_ms);
    kv["alpha_los"] = fmt_double(c.alpha_los);
    kv["alpha_nlos"] = fmt_double(c.alpha_nlos);
    kv["m_los"] = std::to_string(c.m_los);
    kv["m_nlos"] = std::to_string(c.m_nlos);
    kv["d0"] = fmt_double(c.d0);
    kv["snr_db"] = fmt_double(c.snr_db);
    kv["n_bs_elements"] = std::to_string(c.n_bs_elements);
    kv["n_ms_elements"] = std::to_string(c.n_ms_elements);
    kv["hops"] = std::to_string(c.hops);
    kv["outage_constraint"] = fmt_double(c.outage_constraint);
    kv["n_trials"] = std::to_string(c.n_trials);
    kv["bs_region_margin"] = fmt_double(c.resolved_margin());
    kv["sector_model"] =
        c.sector_model == SectorModel::voronoi_wedge ? "voronoi_wedge" : "disc_wedge";
    kv["psi"] = fmt_double(c.psi);
    kv["sector_area_samples"] = std::to_string(c.sector_area_samples);
    kv["ex_position_draws"] = std::to_string(c.ex_position_draws);
    kv["oracle_draws"] = std::to_string(c.oracle_draws);
    kv["master_seed"] = std::to_string(c.master_seed);
    kv["eq3_literal"] = c.eq3_literal ? "true" : "false";
    kv["ucp_retry_budget"] = std::to_string(c.ucp_retry_budget);
    kv["shannon_loss"] = fmt_double(c.shannon_loss);
    kv["a2_excludes_sector"] = c.a2_excludes_sector ? "true" : "false";
    kv["workers"] = std::to_string(c.workers);
    return kv;
}

void RunManifest::write(const std::filesystem::path& path) const
{
    nlohmann::json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command_line"] = command_line;
    j["master_seed"] = master_seed;
    j["config"] = config;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["outputs"] = nlohmann::json::array();
    for (const Output& o : outputs)
        j["outputs"].push_back({{"file", o.file}, {"checksum", o.checksum}});
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

RunManifest RunManifest::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read '" + path.string() + "'");
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.tool = j.at("tool").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.command_line = j.at("command_line").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    for (const auto& o : j.at("outputs"))
        m.outputs.push_back({o.at("file").get<std::string>(), o.at("checksum").get<std::string>()});
    return m;
}

} // namespace hopsim
