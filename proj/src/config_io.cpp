#include "townsim/config_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "townsim/csv.hpp"
#include "townsim/errors.hpp"

namespace townsim {

const char* const kVersion = "townsim 1.0.0";

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

struct KeyError {
    std::string message;
};

double as_double(std::string_view v) {
    double out = 0.0;
    if (!csv::parse(v, out) || !std::isfinite(out))
        throw KeyError{"expected a number, got \"" + std::string(v) + "\""};
    return out;
}

template <typename Int>
Int as_int(std::string_view v) {
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw KeyError{"expected an integer, got \"" + std::string(v) + "\""};
    return out;
}

bool as_switch(std::string_view v) {
    if (v == "on" || v == "true" || v == "1")
        return true;
    if (v == "off" || v == "false" || v == "0")
        return false;
    throw KeyError{"expected on or off, got \"" + std::string(v) + "\""};
}

Waning as_waning(std::string_view v) {
    if (v == "fixed")
        return Waning::Fixed;
    if (v == "exponential")
        return Waning::Exponential;
    throw KeyError{"expected fixed or exponential, got \"" + std::string(v) + "\""};
}

std::string waning_text(Waning w) { return w == Waning::Fixed ? "fixed" : "exponential"; }

ImmunityMode as_mode(std::string_view v) {
    if (v == "homogeneous")
        return ImmunityMode::Homogeneous;
    if (v == "rulebased")
        return ImmunityMode::RuleBased;
    throw KeyError{"expected homogeneous or rulebased, got \"" + std::string(v) + "\""};
}

struct Key {
    const char* name;
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, std::string_view)> set;
};

#define TS_NUM(key, field)                                                    \
    Key {                                                                     \
        key, [](const ScenarioConfig& c) { return csv::number(c.field); },     \
            [](ScenarioConfig& c, std::string_view v) { c.field = as_double(v); } \
    }
#define TS_INT(key, field)                                                              \
    Key {                                                                               \
        key, [](const ScenarioConfig& c) { return std::to_string(c.field); },           \
            [](ScenarioConfig& c, std::string_view v) {                                 \
                c.field = as_int<std::remove_cvref_t<decltype(c.field)>>(v);            \
            }                                                                           \
    }
#define TS_SWITCH(key, field)                                                      \
    Key {                                                                          \
        key, [](const ScenarioConfig& c) { return std::string(c.field ? "on" : "off"); }, \
            [](ScenarioConfig& c, std::string_view v) { c.field = as_switch(v); }   \
    }

const std::vector<Key>& key_table() {
    static const std::vector<Key> keys = {
        TS_INT("population", population),
        TS_INT("days", days),
        TS_INT("initial_infections", initial_infections),
        TS_INT("seed", seed),
        TS_INT("network_seed", network_seed),
        TS_INT("replicates", replicates),
        TS_NUM("beta", rates.beta),
        TS_NUM("delta", rates.delta),
        TS_NUM("testing_rate", rates.lambda),
        TS_NUM("tau", rates.tau),
        Key{"incubation_days", nullptr,
            [](ScenarioConfig& c, std::string_view v) {
                const double d = as_double(v);
                if (!(d >= 1.0))
                    throw KeyError{"incubation_days must be at least 1"};
                c.rates.tau = 1.0 / d;
            }},
        Key{"immunity_mode",
            [](const ScenarioConfig& c) {
                return std::string(c.rates.immunity_mode == ImmunityMode::Homogeneous ? "homogeneous" : "rulebased");
            },
            [](ScenarioConfig& c, std::string_view v) { c.rates.immunity_mode = as_mode(v); }},
        TS_INT("immunity_days", rates.natural_immunity_days),
        Key{"immunity_waning", [](const ScenarioConfig& c) { return waning_text(c.rates.natural_waning); },
            [](ScenarioConfig& c, std::string_view v) { c.rates.natural_waning = as_waning(v); }},
        TS_INT("vaccine_immunity_days", rates.vaccine_immunity_days),
        Key{"vaccine_waning", [](const ScenarioConfig& c) { return waning_text(c.rates.vaccine_waning); },
            [](ScenarioConfig& c, std::string_view v) { c.rates.vaccine_waning = as_waning(v); }},
        TS_SWITCH("vaccination", vaccination_enabled),
        TS_INT("max_doses", vaccine.max_doses),
        TS_NUM("uptake", vaccine.uptake),
        TS_INT("vaccine_start_day", vaccine.start_day),
        TS_INT("initial_doses", vaccine.initial_doses),
        TS_INT("daily_cap", vaccine.daily_cap),
        TS_INT("dose2_interval", vaccine.dose2_interval),
        TS_INT("dose3_interval", vaccine.dose3_interval),
        TS_NUM("efficacy1", vaccine.efficacy[0]),
        TS_NUM("efficacy2", vaccine.efficacy[1]),
        TS_NUM("efficacy3", vaccine.efficacy[2]),
        Key{"first_dose_order",
            [](const ScenarioConfig& c) {
                return std::string(c.vaccine.first_dose_order == FirstDoseOrder::Random ? "random" : "degree_desc");
            },
            [](ScenarioConfig& c, std::string_view v) {
                if (v == "random")
                    c.vaccine.first_dose_order = FirstDoseOrder::Random;
                else if (v == "degree_desc")
                    c.vaccine.first_dose_order = FirstDoseOrder::DegreeDesc;
                else
                    throw KeyError{"expected random or degree_desc, got \"" + std::string(v) + "\""};
            }},
        TS_NUM("mean_degree", mean_degree),
        TS_NUM("scale_free_exponent", scale_free_exponent),
        TS_SWITCH("travel", travel_enabled),
        TS_NUM("departure_rate", travel.departure),
        TS_NUM("return_rate", travel.ret),
        TS_NUM("outside_population", outside_population),
        TS_NUM("outside_beta", outside_beta),
        TS_NUM("outside_delta", outside_delta),
        TS_INT("outside_immunity_days", outside_immunity_days),
        TS_NUM("outside_initial_cases", outside_initial_cases),
    };
    return keys;
}

#undef TS_NUM
#undef TS_INT
#undef TS_SWITCH

const Key* find_key(std::string_view name) {
    for (const auto& k : key_table())
        if (name == k.name)
            return &k;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& k : key_table())
            out.emplace_back(k.name);
        return out;
    }();
    return names;
}

void set_config_value(ScenarioConfig& config, std::string_view key, std::string_view value, int line) {
    const Key* k = find_key(key);
    if (!k)
        throw ConfigError("unknown key \"" + std::string(key) + "\"", line);
    try {
        k->set(config, trim(value));
    } catch (const KeyError& e) {
        throw ConfigError(std::string(key) + ": " + e.message, line);
    }
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig config;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected \"key = value\"", line_no);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("expected \"key = value\"", line_no);
        set_config_value(config, key, value, line_no);
    }
    try {
        config.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what());
    }
    return config;
}

std::string serialize_config(const ScenarioConfig& config) {
    std::string out;
    for (const auto& k : key_table()) {
        if (!k.get)
            continue;
        out += k.name;
        out += " = ";
        out += k.get(config);
        out += '\n';
    }
    return out;
}

std::string config_hash(const ScenarioConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(std::ostream& os, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["config_hash"] = m.config_hash;
    j["seeds"] = m.seeds;
    j["started"] = m.started;
    j["finished"] = m.finished;
    j["outputs"] = m.outputs;
    j["version"] = m.version;
    j["status"] = m.status;
    if (!m.error.empty())
        j["error"] = m.error;
    os << j.dump(2) << '\n';
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

AnalysisSeries read_timeseries_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw AnalysisInputError("empty input", 1);
    const auto header = csv::split(line);
    int col_day = -1, col_infected = -1, col_degree = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        std::string_view h = header[c];
        while (!h.empty() && h.back() == '\r')
            h.remove_suffix(1);
        if (h == "day")
            col_day = static_cast<int>(c);
        else if (h == "infected")
            col_infected = static_cast<int>(c);
        else if (h == "mean_degree_infected")
            col_degree = static_cast<int>(c);
    }
    if (col_day < 0 || col_infected < 0 || col_degree < 0)
        throw AnalysisInputError("header must contain day, infected and mean_degree_infected columns", 1);

    AnalysisSeries out;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        const auto fields = csv::split(line);
        if (fields.size() != header.size())
            throw AnalysisInputError("expected " + std::to_string(header.size()) + " fields, found " +
                                         std::to_string(fields.size()),
                                     line_no);
        double day = 0.0, infected = 0.0, degree = 0.0;
        if (!csv::parse(fields[col_day], day) || !csv::parse(fields[col_infected], infected) ||
            !csv::parse(fields[col_degree], degree) || !std::isfinite(infected) || !std::isfinite(degree))
            throw AnalysisInputError("non-numeric value", line_no);
        if (infected < 0.0 || infected > 1.0 || degree < 0.0)
            throw AnalysisInputError("infected must lie in [0,1] and mean degree must be non-negative", line_no);
        out.day.push_back(static_cast<int>(day));
        out.infected.push_back(infected);
        out.mean_degree_infected.push_back(degree);
    }
    if (out.day.empty())
        throw AnalysisInputError("no data rows", line_no);
    return out;
}

void write_dose_log_csv(std::ostream& os, const std::vector<DoseEvent>& events) {
    os << "day,agent_id,dose_number,succeeded\n";
    for (const auto& e : events)
        os << e.day << ',' << e.agent << ',' << e.dose << ',' << (e.succeeded ? 1 : 0) << '\n';
}

}  // namespace townsim
