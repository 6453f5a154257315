#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopsim/config.hpp"
#include "hopsim/csv.hpp"
#include "hopsim/errors.hpp"
#include "hopsim/experiment.hpp"
#include "hopsim/manifest.hpp"
#include "hopsim/validation.hpp"
#include "hopsim/version.hpp"

namespace fs = std::filesystem;
using namespace hopsim;

namespace {

struct CliArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::uint64_t workers_flag = 0;
    std::string out_dir = ".";
    double beta_min = 0.1;
    double beta_max = 10.0;
    std::size_t beta_steps = 21;
    std::vector<double> lambda_grid = {0.05, 0.1, 0.2, 0.4};
    std::string mode = "semi";
    std::size_t cases = 50;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
};

void add_common_options(CLI::App* sub, CliArgs& args)
{
    sub->add_option("--config", args.config_path, "flat key=value configuration file");
    sub->add_option("--set", args.overrides, "config override key=value (repeatable)");
    args.seed_opt = sub->add_option("--seed", args.seed, "master seed")->envname("HOPSIM_SEED");
    args.trials_opt = sub->add_option("--trials", args.trials, "number of network trials");
    args.workers_opt = sub->add_option("--workers", args.workers_flag, "worker thread count");
    sub->add_option("--out", args.out_dir, "output directory")->capture_default_str();
}

void add_beta_options(CLI::App* sub, CliArgs& args, double lo, double hi, std::size_t steps)
{
    args.beta_min = lo;
    args.beta_max = hi;
    args.beta_steps = steps;
    sub->add_option("--beta-min", args.beta_min, "lowest SINR threshold")->capture_default_str();
    sub->add_option("--beta-max", args.beta_max, "highest SINR threshold")->capture_default_str();
    sub->add_option("--beta-steps", args.beta_steps, "grid size (log spaced)")
        ->capture_default_str();
}

SystemConfig build_config(const CliArgs& args)
{
    SystemConfig config = parse_config(args.config_path, args.overrides);
    if (args.seed_opt->count() > 0)
        config.master_seed = args.seed;
    if (args.trials_opt->count() > 0)
        config.n_trials = args.trials;
    if (args.workers_opt->count() > 0)
        config.workers = static_cast<unsigned>(args.workers_flag);
    config.validate();
    return config;
}

std::vector<double> threshold_grid(const CliArgs& args)
{
    if (!(args.beta_min > 0.0) || !(args.beta_max > args.beta_min) || args.beta_steps < 2)
        throw ConfigError("threshold grid: need 0 < --beta-min < --beta-max and --beta-steps >= 2");
    return log_grid(args.beta_min, args.beta_max, args.beta_steps);
}

std::string join_argv(int argc, char** argv)
{
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i > 0)
            s += ' ';
        s += argv[i];
    }
    return s;
}

ProgressFn stderr_progress(const char* label)
{
    return [label](std::uint64_t done, std::uint64_t total) {
        const std::uint64_t step = total >= 20 ? total / 20 : 1;
        if (done % step == 0 || done == total) {
            std::fprintf(stderr, "\r%s %llu/%llu", label, static_cast<unsigned long long>(done),
                         static_cast<unsigned long long>(total));
            if (done == total)
                std::fprintf(stderr, "\n");
        }
    };
}

struct ManifestWriter {
    RunManifest manifest;
    fs::path dir;

    ManifestWriter(const SystemConfig& config, const std::string& cmdline, const fs::path& out_dir)
        : dir(out_dir)
    {
        fs::create_directories(dir);
        manifest.tool = kToolName;
        manifest.version = kToolVersion;
        manifest.command_line = cmdline;
        manifest.master_seed = config.master_seed;
        manifest.config = config_to_kv(config);
        manifest.started_at = iso8601_now();
    }

    void add(const fs::path& file) { manifest.outputs.push_back({file.filename().string(), file_checksum(file)}); }

    void finish(const std::string& name)
    {
        manifest.finished_at = iso8601_now();
        manifest.write(dir / name);
    }
};

int cmd_ccdf(const CliArgs& args, const std::string& cmdline)
{
    const SystemConfig config = build_config(args);
    const std::vector<double> grid = threshold_grid(args);
    ManifestWriter mw(config, cmdline, args.out_dir);

    const CurveTable table =
        ccdf_conditional_outage(config, grid, config.outage_constraint, stderr_progress("trials"));

    std::vector<std::vector<double>> rows;
    for (const CurvePoint& p : table.rows)
        rows.push_back({p.x, p.y, p.std_error});
    const fs::path out = mw.dir / "ccdf.csv";
    write_csv(out, "beta,ccdf,stderr", rows);
    mw.add(out);
    mw.finish("ccdf_manifest.json");
    std::printf("wrote %s (%zu thresholds, %llu trials)\n", out.string().c_str(), grid.size(),
                static_cast<unsigned long long>(config.n_trials));
    return 0;
}

int cmd_ase(const CliArgs& args, const std::string& cmdline)
{
    const SystemConfig config = build_config(args);
    const std::vector<double> grid = threshold_grid(args);
    if (args.mode != "full" && args.mode != "semi")
        throw ConfigError("--mode must be 'semi' or 'full'");
    const AverageMode mode =
        args.mode == "full" ? AverageMode::full_mc : AverageMode::semi_analytic;
    if (args.lambda_grid.empty())
        throw ConfigError("--lambda-bs: need at least one density");
    for (double v : args.lambda_grid)
        if (!(v > 0.0))
            throw ConfigError("--lambda-bs: densities must be > 0");
    std::vector<double> lambdas = args.lambda_grid;
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    ManifestWriter mw(config, cmdline, args.out_dir);

    const std::vector<AseEntry> entries =
        ase_sweep(config, lambdas, grid, mode, stderr_progress("trials"));

    std::vector<std::vector<double>> rows;
    for (const AseEntry& e : entries)
        rows.push_back({e.lambda_bs, e.beta, e.ase, e.std_error});
    const fs::path out = mw.dir / "ase.csv";
    write_csv(out, "lambda_bs,beta,ase,stderr", rows);
    mw.add(out);
    mw.finish("ase_manifest.json");
    std::printf("wrote %s (%zu densities x %zu thresholds)\n", out.string().c_str(),
                lambdas.size(), grid.size());
    return 0;
}

int cmd_validate(const CliArgs& args, const std::string& cmdline)
{
    const SystemConfig config = build_config(args);
    ManifestWriter mw(config, cmdline, args.out_dir);

    const std::vector<ValidationOutcome> outcomes =
        run_validation(config, args.cases, config.master_seed, config.oracle_draws);

    std::size_t passed = 0;
    std::vector<std::vector<double>> rows;
    for (const ValidationOutcome& o : outcomes) {
        passed += o.pass ? 1 : 0;
        std::printf("case %3llu: m_los=%d L=%d beta=%7.4f los=%zu nlos=%zu closed=%.6f "
                    "oracle=%.6f(+-%.6f) diff=%.6f tol=%.6f %s\n",
                    static_cast<unsigned long long>(o.index), o.m_los, o.hops, o.beta, o.n_los,
                    o.n_nlos, o.closed_form, o.oracle, o.oracle_std_error, o.abs_diff, o.tolerance,
                    o.pass ? "PASS" : "FAIL");
        rows.push_back({static_cast<double>(o.index), static_cast<double>(o.m_los),
                        static_cast<double>(o.hops), o.beta, static_cast<double>(o.n_los),
                        static_cast<double>(o.n_nlos), o.closed_form, o.oracle, o.oracle_std_error,
                        o.abs_diff, o.tolerance, o.pass ? 1.0 : 0.0});
    }
    const fs::path out = mw.dir / "validate_report.csv";
    write_csv(out,
              "case,m_los,hops,beta,n_los,n_nlos,closed_form,oracle,oracle_stderr,abs_diff,"
              "tolerance,pass",
              rows);
    mw.add(out);
    mw.finish("validate_manifest.json");
    std::printf("%zu/%zu cases within tolerance\n", passed, outcomes.size());
    return passed == outcomes.size() ? 0 : 3;
}

int cmd_topology(const CliArgs& args, const std::string& cmdline)
{
    const SystemConfig config = build_config(args);
    ManifestWriter mw(config, cmdline, args.out_dir);

    const NetworkTopology topo = trial_topology(config, 0);

    std::vector<std::vector<double>> bs_rows;
    for (const Point& p : topo.bs)
        bs_rows.push_back({p.x, p.y});
    const fs::path bs_path = mw.dir / "topology_bs.csv";
    write_csv(bs_path, "x,y", bs_rows);
    mw.add(bs_path);

    // Sector wedge outline: the two rays bounding the reference beam, joined
    // by an arc at the faded-zone radius.
    const double half = topo.wedge_half_angle();
    std::vector<std::vector<double>> wedge_rows{{0.0, 0.0}};
    constexpr int kArc = 64;
    for (int i = 0; i <= kArc; ++i) {
        const double a = topo.sector_offset - half + 2.0 * half * i / kArc;
        wedge_rows.push_back({config.r_nlos * std::cos(a), config.r_nlos * std::sin(a)});
    }
    wedge_rows.push_back({0.0, 0.0});
    const fs::path wedge_path = mw.dir / "topology_sector.csv";
    write_csv(wedge_path, "x,y", wedge_rows);
    mw.add(wedge_path);

    constexpr int kCircle = 128;
    for (const auto& [radius, name] :
         {std::pair<double, const char*>{config.r_los, "topology_los_circle.csv"},
          std::pair<double, const char*>{config.r_nlos, "topology_nlos_circle.csv"}}) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i <= kCircle; ++i) {
            const double a = 2.0 * M_PI * i / kCircle;
            rows.push_back({radius * std::cos(a), radius * std::sin(a)});
        }
        const fs::path path = mw.dir / name;
        write_csv(path, "x,y", rows);
        mw.add(path);
    }

    mw.finish("topology_manifest.json");
    std::printf("wrote %zu base stations to %s\n", topo.bs.size(), bs_path.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{std::string(kToolName) +
                 " - frequency-hopping mmWave uplink outage and spectral-efficiency simulator"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    CliArgs ccdf_args, ase_args, validate_args, topology_args;

    CLI::App* ccdf = app.add_subcommand("ccdf", "CCDF of the conditional outage probability");
    add_common_options(ccdf, ccdf_args);
    add_beta_options(ccdf, ccdf_args, 0.1, 10.0, 21);

    CLI::App* ase = app.add_subcommand("ase", "area spectral efficiency vs BS density");
    add_common_options(ase, ase_args);
    add_beta_options(ase, ase_args, 1.0, 10.0, 2);
    ase->add_option("--lambda-bs", ase_args.lambda_grid, "BS density grid")
        ->capture_default_str();
    ase->add_option("--mode", ase_args.mode, "averaging mode: semi or full")
        ->capture_default_str();

    CLI::App* validate =
        app.add_subcommand("validate", "closed form vs fading-simulation comparison");
    add_common_options(validate, validate_args);
    validate->add_option("--cases", validate_args.cases, "number of randomized cases")
        ->capture_default_str();

    CLI::App* topology = app.add_subcommand("topology", "dump one sampled BS topology");
    add_common_options(topology, topology_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string cmdline = join_argv(argc, argv);
    try {
        if (app.got_subcommand(ccdf))
            return cmd_ccdf(ccdf_args, cmdline);
        if (app.got_subcommand(ase))
            return cmd_ase(ase_args, cmdline);
        if (app.got_subcommand(validate))
            return cmd_validate(validate_args, cmdline);
        if (app.got_subcommand(topology))
            return cmd_topology(topology_args, cmdline);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const PackingFailure& e) {
        std::fprintf(stderr, "packing failure: %s\n", e.what());
        return 4;
    } catch (const NumericalInstability& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 3;
    } catch (const DegenerateGeometry& e) {
        std::fprintf(stderr, "geometry error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
