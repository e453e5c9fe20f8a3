#include "townsim/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "townsim/csv.hpp"
#include "townsim/errors.hpp"

namespace townsim {

void ScenarioConfig::validate() const {
    if (population < 10)
        throw InvalidParameter("population must be at least 10");
    if (days < 1)
        throw InvalidParameter("days must be at least 1");
    if (initial_infections > population)
        throw InvalidParameter("initial_infections must not exceed population");
    rates.validate();
    vaccine.validate();
    travel.validate();
    if (!(mean_degree >= 2.0) || !(mean_degree < static_cast<double>(population) - 1.0))
        throw InvalidParameter("mean_degree must lie in [2, population-1)");
    if (!(outside_population > 0.0))
        throw InvalidParameter("outside_population must be positive");
    if (!(outside_beta >= 0.0 && outside_beta <= 1.0))
        throw InvalidParameter("outside_beta must lie in [0,1]");
    if (!(outside_delta >= 0.0 && outside_delta <= 1.0))
        throw InvalidParameter("outside_delta must lie in [0,1]");
    if (outside_immunity_days < 1)
        throw InvalidParameter("outside_immunity_days must be at least 1");
    if (!(outside_initial_cases >= 0.0 && outside_initial_cases <= outside_population))
        throw InvalidParameter("outside_initial_cases must lie in [0, outside_population]");
    if (replicates < 1)
        throw InvalidParameter("replicates must be at least 1");
}

std::vector<double> TimeSeries::infected() const {
    std::vector<double> out(rows.size());
    std::transform(rows.begin(), rows.end(), out.begin(), [](const DailyRecord& r) { return r.infected; });
    return out;
}

std::vector<double> TimeSeries::mean_degree_infected() const {
    std::vector<double> out(rows.size());
    std::transform(rows.begin(), rows.end(), out.begin(),
                   [](const DailyRecord& r) { return r.mean_degree_infected; });
    return out;
}

const char* const kTimeseriesHeader =
    "day,S,E,U,R,V1,V2,V3,outside,infected,mean_degree_infected,cumulative_doses,outside_prevalence";

void write_timeseries_csv(std::ostream& os, const TimeSeries& ts) {
    os << kTimeseriesHeader << '\n';
    for (const auto& r : ts.rows) {
        os << r.day;
        for (auto c : r.counts)
            os << ',' << c;
        os << ',' << r.outside << ',' << csv::number(r.infected) << ',' << csv::number(r.mean_degree_infected) << ','
           << r.cumulative_doses << ',' << csv::number(r.outside_prevalence) << '\n';
    }
}

ContactNetwork build_network(const ScenarioConfig& config) {
    return generate_ba(config.population, config.mean_degree, config.network_seed);
}

std::vector<OutsideCity> build_outside_trajectory(const ScenarioConfig& config) {
    auto city = OutsideCity::seeded(config.outside_population, config.outside_beta, config.outside_delta,
                                    1.0 / config.outside_immunity_days, config.outside_initial_cases);
    return outside_trajectory(city, config.days);
}

TimeSeries run_scenario(const ScenarioConfig& config) {
    config.validate();
    const auto net = build_network(config);
    const auto outside = build_outside_trajectory(config);
    return run_scenario(config, net, outside);
}

TimeSeries run_scenario(const ScenarioConfig& config, const ContactNetwork& net, std::span<const OutsideCity> outside,
                        std::vector<DoseEvent>* dose_log) {
    config.validate();
    if (net.size() != config.population)
        throw InvalidParameter("network size does not match population");
    if (outside.size() < static_cast<std::size_t>(config.days) + 1)
        throw InvalidParameter("outside-city trajectory shorter than the run");

    Rng seeding = make_stream(config.seed, Stream::Seeding);
    Rng transmission = make_stream(config.seed, Stream::Transmission);
    Rng travel = make_stream(config.seed, Stream::Travel);
    Rng willingness = make_stream(config.seed, Stream::Willingness);
    Rng vaccination = make_stream(config.seed, Stream::Vaccination);

    const bool vaccinate = config.vaccination_enabled && config.vaccine.max_doses > 0;

    TownState state(config.population);
    if (vaccinate)
        assign_willingness(state, config.vaccine.uptake, willingness);
    seed_infections(state, config.initial_infections, seeding);

    TimeSeries ts;
    ts.rows.reserve(static_cast<std::size_t>(config.days) + 1);
    auto record = [&](int day) {
        DailyRecord rec = snapshot(state, net, day);
        rec.outside_prevalence = outside[static_cast<std::size_t>(day)].i;
        ts.rows.push_back(rec);
    };
    record(0);

    for (int day = 1; day <= config.days; ++day) {
        if (config.travel_enabled)
            step_travel(state, outside[static_cast<std::size_t>(day) - 1], config.travel, config.rates, travel, day);
        step_day(state, net, config.rates, transmission, day);
        if (vaccinate)
            administer_doses(state, net, day, config.vaccine, config.rates, vaccination, dose_log);
        record(day);
    }
    return ts;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    const std::size_t n = series.size();
    std::vector<double> out(n);
    if (window <= 1) {
        std::copy(series.begin(), series.end(), out.begin());
        return out;
    }
    const std::size_t left = (window - 1) / 2;
    const std::size_t right = window - 1 - left;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + series[i];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= left ? i - left : 0;
        const std::size_t hi = std::min(n, i + right + 1);
        out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    }
    return out;
}

std::vector<std::size_t> find_peaks(std::span<const double> x, double min_prominence) {
    std::vector<std::size_t> peaks;
    const std::size_t n = x.size();
    if (n < 3)
        return peaks;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (x[i - 1] < x[i]) {
            std::size_t ahead = i + 1;
            while (ahead + 1 < n && x[ahead] == x[i])
                ++ahead;
            if (x[ahead] < x[i]) {
                const std::size_t peak = (i + ahead - 1) / 2;
                double left_min = x[peak];
                for (std::size_t j = peak + 1; j-- > 0;) {
                    if (x[j] > x[peak])
                        break;
                    left_min = std::min(left_min, x[j]);
                }
                double right_min = x[peak];
                for (std::size_t j = peak; j < n; ++j) {
                    if (x[j] > x[peak])
                        break;
                    right_min = std::min(right_min, x[j]);
                }
                if (x[peak] - std::max(left_min, right_min) >= min_prominence)
                    peaks.push_back(peak);
                i = ahead;
                continue;
            }
        }
        ++i;
    }
    return peaks;
}

std::optional<double> detect_endemic_period(std::span<const double> series, std::size_t window,
                                            double min_prominence) {
    if (window == 0 || series.size() < 2 * window)
        throw InvalidParameter("series must cover at least two smoothing windows");
    const auto smooth = moving_average(series, window);
    const auto peaks = find_peaks(smooth, min_prominence);
    if (peaks.size() < 2)
        return std::nullopt;
    return static_cast<double>(peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

}  // namespace townsim
