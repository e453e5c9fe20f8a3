#include "townsim/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "townsim/config_io.hpp"
#include "townsim/csv.hpp"
#include "townsim/errors.hpp"
#include "townsim/scenario.hpp"
#include "townsim/stats.hpp"

namespace fs = std::filesystem;

namespace townsim::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    return os;
}

std::string replicate_name(const char* stem, std::size_t r, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03zu%s", stem, r, ext);
    return buf;
}

// Config file, then TOWNSIM_SEED, then command-line overrides.
ScenarioConfig resolve_config(const RunOptions& opts) {
    ScenarioConfig config = opts.config_path.empty() ? parse_config("") : parse_config(read_file(opts.config_path));
    if (opts.seed) {
        config.seed = *opts.seed;
    } else if (const char* env = std::getenv("TOWNSIM_SEED"); env && *env) {
        set_config_value(config, "seed", env);
    }
    if (opts.replicates)
        config.replicates = *opts.replicates;
    if (opts.doses) {
        if (*opts.doses < 0 || *opts.doses > 3)
            throw ConfigError("--doses must lie in [0,3]");
        config.vaccine.max_doses = *opts.doses;
    }
    if (opts.immunity)
        set_config_value(config, "immunity_mode", *opts.immunity);
    try {
        config.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what());
    }
    return config;
}

// Runs every replicate of `config` into `dir`. The manifest is written on
// success and on failure.
int execute(const ScenarioConfig& config, const RunOptions& opts, const fs::path& dir, std::ostream& out,
            std::ostream& err) {
    RunManifest manifest;
    manifest.config_hash = config_hash(config);
    manifest.seeds = replicate_seeds(config, config.replicates);
    manifest.started = utc_timestamp();
    manifest.version = kVersion;

    int code = kExitOk;
    try {
        fs::create_directories(dir);
        {
            auto os = open_output(dir / "config.txt");
            os << serialize_config(config);
            manifest.outputs.push_back((dir / "config.txt").string());
        }

        ContactNetwork net;
        if (!opts.network_file.empty()) {
            std::ifstream in(opts.network_file);
            if (!in)
                throw std::runtime_error("cannot read network file " + opts.network_file);
            net = read_edge_list(in, config.population);
        } else {
            net = build_network(config);
        }
        const auto outside = build_outside_trajectory(config);

        std::vector<std::vector<DoseEvent>> logs;
        const auto batch = run_replicates(config, manifest.seeds, net, outside, opts.log_doses ? &logs : nullptr);

        auto emit = [&](const std::string& name, auto&& writer) {
            auto os = open_output(dir / name);
            writer(os);
            manifest.outputs.push_back((dir / name).string());
        };
        if (batch.runs.size() == 1) {
            emit("timeseries.csv", [&](std::ostream& os) { write_timeseries_csv(os, batch.runs[0]); });
            if (opts.log_doses)
                emit("doses.csv", [&](std::ostream& os) { write_dose_log_csv(os, logs[0]); });
        } else {
            for (std::size_t r = 0; r < batch.runs.size(); ++r) {
                emit(replicate_name("timeseries", r, ".csv"),
                     [&](std::ostream& os) { write_timeseries_csv(os, batch.runs[r]); });
                if (opts.log_doses)
                    emit(replicate_name("doses", r, ".csv"),
                         [&](std::ostream& os) { write_dose_log_csv(os, logs[r]); });
            }
            emit("summary.csv", [&](std::ostream& os) { write_summary_csv(os, batch.summary); });
        }
        if (opts.export_network)
            emit("network.txt", [&](std::ostream& os) { write_edge_list(os, net); });
        if (opts.export_outside)
            emit("outside.csv", [&](std::ostream& os) { write_outside_csv(os, outside); });
        out << "wrote " << batch.runs.size() << " trajectory file(s) to " << dir.string() << '\n';
    } catch (const std::exception& e) {
        manifest.status = "error";
        manifest.error = e.what();
        err << "error: " << e.what() << '\n';
        code = kExitRuntime;
    }

    manifest.finished = utc_timestamp();
    try {
        fs::create_directories(dir);
        auto os = open_output(dir / "manifest.json");
        write_manifest(os, manifest);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = kExitRuntime;
    }
    return code;
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    ScenarioConfig config;
    try {
        config = resolve_config(opts);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return execute(config, opts, opts.out_dir, out, err);
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream in(opts.timeseries, std::ios::binary);
        if (!in)
            throw AnalysisInputError("cannot read " + opts.timeseries);
        const AnalysisSeries series = read_timeseries_csv(in);

        // Mean degree of the infected is undefined on days without infections.
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> infected = series.infected;
        std::vector<double> degree = series.mean_degree_infected;
        std::size_t dropped = 0;
        for (std::size_t t = 0; t < infected.size(); ++t)
            if (infected[t] == 0.0) {
                infected[t] = nan;
                degree[t] = nan;
                ++dropped;
            }

        const auto ccf = stats::cross_correlation(degree, infected, opts.ccf_window);
        const auto granger = stats::granger_with_aic(infected, degree, opts.max_lag);

        const fs::path dir = opts.out_dir;
        fs::create_directories(dir);
        {
            auto os = open_output(dir / "ccf.csv");
            os << "lag,rho\n";
            for (std::size_t k = 0; k < ccf.lags.size(); ++k)
                os << ccf.lags[k] << ',' << csv::number(ccf.rho[k]) << '\n';
        }
        {
            auto os = open_output(dir / "aic.csv");
            os << "lag,aic\n";
            for (std::size_t k = 0; k < granger.aic_by_lag.size(); ++k)
                os << k + 1 << ',' << csv::number(granger.aic_by_lag[k]) << '\n';
        }
        {
            auto os = open_output(dir / "infection_degree.csv");
            os << "day,infected,mean_degree_infected\n";
            for (std::size_t t = 0; t < series.day.size(); ++t)
                os << series.day[t] << ',' << csv::number(series.infected[t]) << ','
                   << csv::number(series.mean_degree_infected[t]) << '\n';
        }
        {
            auto os = open_output(dir / "granger.txt");
            os << "x = mean_degree_infected\n"
               << "y = infected\n"
               << "days = " << series.day.size() << '\n'
               << "dropped_days = " << dropped << " (no infections)\n"
               << "max_lag = " << opts.max_lag << '\n'
               << "chosen_lag = " << granger.lag << '\n'
               << "lead_days = " << -granger.lag << '\n'
               << "observations = " << granger.observations << '\n'
               << "rss_restricted = " << csv::number(granger.rss_restricted) << '\n'
               << "rss_unrestricted = " << csv::number(granger.rss_unrestricted) << '\n'
               << "f_statistic = " << csv::number(granger.f_statistic) << '\n'
               << "df = " << granger.df_num << ", " << granger.df_den << '\n'
               << "p_value = " << csv::number(granger.p_value) << '\n'
               << "verdict = " << (granger.significant() ? "significant at 0.05" : "not significant at 0.05")
               << '\n'
               << "ccf_window = " << opts.ccf_window << '\n'
               << "ccf_best_negative_lag = " << ccf.best_negative_lag << '\n'
               << "ccf_best_rho = " << csv::number(ccf.best_rho) << '\n';
        }
        out << "granger: lag " << granger.lag << ", p = " << granger.p_value << " ("
            << (granger.significant() ? "significant" : "not significant") << " at 0.05)\n";
        return kExitOk;
    } catch (const AnalysisInputError& e) {
        err << "analysis input error: " << e.what() << '\n';
    } catch (const InsufficientData& e) {
        err << "analysis input error: " << e.what() << '\n';
    } catch (const SingularDesign& e) {
        err << "analysis input error: " << e.what() << " (is a series constant?)\n";
    } catch (const InvalidDof& e) {
        err << "analysis input error: " << e.what() << '\n';
    } catch (const InvalidParameter& e) {
        err << "analysis input error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitAnalysisInput;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
    ScenarioConfig base;
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    try {
        base = resolve_config(opts.run);
        for (const auto& p : opts.params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == p.size())
                throw ConfigError("--param expects key=v1,v2,... got \"" + p + "\"");
            std::vector<std::string> values;
            for (auto v : csv::split(std::string_view(p).substr(eq + 1)))
                values.emplace_back(v);
            axes.emplace_back(p.substr(0, eq), std::move(values));
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    // Every combination is validated before anything runs.
    std::vector<ScenarioConfig> configs;
    std::vector<std::vector<std::string>> labels;
    std::size_t total = 1;
    for (const auto& axis : axes)
        total *= axis.second.size();
    try {
        for (std::size_t k = 0; k < total; ++k) {
            ScenarioConfig c = base;
            std::vector<std::string> label(axes.size());
            std::size_t rest = k;
            for (std::size_t a = axes.size(); a-- > 0;) {
                const auto& values = axes[a].second;
                label[a] = values[rest % values.size()];
                rest /= values.size();
                set_config_value(c, axes[a].first, label[a]);
            }
            try {
                c.validate();
            } catch (const InvalidParameter& e) {
                throw ConfigError(e.what());
            }
            configs.push_back(c);
            labels.push_back(std::move(label));
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const fs::path root = opts.run.out_dir;
    int code = kExitOk;
    try {
        fs::create_directories(root);
        auto idx = open_output(root / "sweep.csv");
        idx << "run";
        for (const auto& [key, values] : axes)
            idx << ',' << key;
        idx << ",directory\n";
        for (std::size_t k = 0; k < configs.size(); ++k) {
            const std::string name = replicate_name("run", k, "");
            idx << k;
            for (const auto& v : labels[k])
                idx << ',' << v;
            idx << ',' << name << '\n';
            const int rc = execute(configs[k], opts.run, root / name, out, err);
            if (rc != kExitOk)
                code = rc;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return code;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Agent-based township epidemic and vaccination simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunOptions run;
    std::uint64_t seed = 0;
    std::size_t replicates = 1;
    int doses = 3;
    std::string immunity;
    auto add_run_flags = [&](CLI::App* cmd, RunOptions& o) {
        cmd->add_option("--config", o.config_path, "key = value config file")->check(CLI::ExistingFile);
        cmd->add_option("--out", o.out_dir, "output directory");
        cmd->add_option("--seed", seed, "base RNG seed (falls back to TOWNSIM_SEED)");
        cmd->add_option("--replicates", replicates, "number of replicates")->check(CLI::PositiveNumber);
        cmd->add_option("--doses", doses, "maximum doses per person")->check(CLI::Range(0, 3));
        cmd->add_option("--immunity", immunity, "natural immunity rule")
            ->check(CLI::IsMember({"homogeneous", "rulebased"}));
        cmd->add_option("--network-file", o.network_file, "read the contact network from an edge list")
            ->check(CLI::ExistingFile);
        cmd->add_flag("--export-network", o.export_network, "write network.txt");
        cmd->add_flag("--log-doses", o.log_doses, "write the per-dose event log");
        cmd->add_flag("--export-outside", o.export_outside, "write the outside-city trajectory");
    };

    auto* run_cmd = app.add_subcommand("run", "simulate a scenario");
    add_run_flags(run_cmd, run);

    AnalyzeOptions analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "cross-correlation and Granger analysis of a time series");
    analyze_cmd->add_option("timeseries", analyze.timeseries, "timeseries.csv from `run`")->required();
    analyze_cmd->add_option("--out", analyze.out_dir, "output directory");
    analyze_cmd->add_option("--max-lag", analyze.max_lag, "largest VAR lag order considered")
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--ccf-window", analyze.ccf_window, "largest cross-correlation lag")
        ->check(CLI::NonNegativeNumber);

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "run the cartesian product of parameter values");
    add_run_flags(sweep_cmd, sweep.run);
    sweep_cmd->add_option("--param", sweep.params, "key=v1,v2,... (repeatable)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    auto finish = [&](CLI::App* cmd, RunOptions& o) {
        if (cmd->count("--seed"))
            o.seed = seed;
        if (cmd->count("--replicates"))
            o.replicates = replicates;
        if (cmd->count("--doses"))
            o.doses = doses;
        if (cmd->count("--immunity"))
            o.immunity = immunity;
    };
    if (*run_cmd) {
        finish(run_cmd, run);
        return cmd_run(run, out, err);
    }
    if (*analyze_cmd)
        return cmd_analyze(analyze, out, err);
    finish(sweep_cmd, sweep.run);
    return cmd_sweep(sweep, out, err);
}

}  // namespace townsim::cli
