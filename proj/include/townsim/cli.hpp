#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace townsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitAnalysisInput = 4;

struct RunOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicates;
    std::optional<int> doses;
    std::optional<std::string> immunity;
    std::string network_file;
    bool export_network = false;
    bool log_doses = false;
    bool export_outside = false;
};

struct AnalyzeOptions {
    std::string timeseries;
    std::string out_dir = "analysis";
    int max_lag = 60;
    int ccf_window = 60;
};

struct SweepOptions {
    RunOptions run;
    std::vector<std::string> params;  // "key=v1,v2,..."
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

/// Full command-line entry point (subcommands run, analyze, sweep).
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace townsim::cli
