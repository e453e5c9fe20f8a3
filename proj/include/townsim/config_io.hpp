#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "townsim/scenario.hpp"

namespace townsim {

/// Parses flat `key = value` text with `#` comments. Unspecified keys keep
/// their defaults; unknown keys, malformed values and out-of-range values
/// throw ConfigError.
ScenarioConfig parse_config(std::string_view text);

/// Canonical text form: every key, fixed order, round-trip exact.
std::string serialize_config(const ScenarioConfig& config);

/// FNV-1a 64-bit hash of the canonical text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

/// Keys accepted by parse_config.
const std::vector<std::string>& config_keys();

/// Applies one `key = value` assignment to `config`; throws ConfigError.
void set_config_value(ScenarioConfig& config, std::string_view key, std::string_view value, int line = 0);

struct RunManifest {
    std::string config_hash;
    std::vector<std::uint64_t> seeds;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;
    std::string version;
    std::string status = "ok";
    std::string error;
};

void write_manifest(std::ostream& os, const RunManifest& manifest);

/// Current UTC time as ISO-8601.
std::string utc_timestamp();

extern const char* const kVersion;

/// The two series the analysis consumes, one entry per day.
struct AnalysisSeries {
    std::vector<int> day;
    std::vector<double> infected;
    std::vector<double> mean_degree_infected;
};

/// Reads a time-series CSV as written by write_timeseries_csv (columns located
/// by header name). Throws AnalysisInputError with the offending line number.
AnalysisSeries read_timeseries_csv(std::istream& is);

void write_dose_log_csv(std::ostream& os, const std::vector<DoseEvent>& events);

}  // namespace townsim
