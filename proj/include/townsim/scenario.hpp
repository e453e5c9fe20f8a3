#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "townsim/epidemic.hpp"
#include "townsim/network.hpp"
#include "townsim/travel.hpp"
#include "townsim/vaccination.hpp"

namespace townsim {

/// Everything needed to reproduce one simulated township.
struct ScenarioConfig {
    std::size_t population = 10000;
    int days = 1080;
    std::size_t initial_infections = 4;

    EpidemicRates rates;
    VaccineSchedule vaccine;
    bool vaccination_enabled = true;

    double mean_degree = 5.0;
    double scale_free_exponent = 2.05;  // informational; the network is grown, not fitted
    std::uint64_t network_seed = 1;

    TravelRates travel;
    bool travel_enabled = true;
    double outside_population = 4'000'000.0;
    double outside_beta = 0.14;
    double outside_delta = 0.05;
    int outside_immunity_days = 180;
    double outside_initial_cases = 100.0;

    std::uint64_t seed = 1;
    std::size_t replicates = 1;

    void validate() const;
    bool operator==(const ScenarioConfig&) const = default;
};

struct TimeSeries {
    std::vector<DailyRecord> rows;

    [[nodiscard]] std::size_t size() const { return rows.size(); }
    [[nodiscard]] std::vector<double> infected() const;
    [[nodiscard]] std::vector<double> mean_degree_infected() const;
};

void write_timeseries_csv(std::ostream& os, const TimeSeries& ts);
extern const char* const kTimeseriesHeader;

[[nodiscard]] ContactNetwork build_network(const ScenarioConfig& config);
[[nodiscard]] std::vector<OutsideCity> build_outside_trajectory(const ScenarioConfig& config);

/// Full run on a freshly grown network.
TimeSeries run_scenario(const ScenarioConfig& config);

/// Full run on a shared network and precomputed outside-city trajectory.
/// Daily order: travel, outside city, epidemic step, vaccination, record.
TimeSeries run_scenario(const ScenarioConfig& config, const ContactNetwork& net,
                        std::span<const OutsideCity> outside, std::vector<DoseEvent>* dose_log = nullptr);

/// Pointwise mean and central 90% band of I(t) across replicates.
struct ReplicateSummary {
    std::vector<double> mean;
    std::vector<double> lower;  // 5th percentile
    std::vector<double> upper;  // 95th percentile
};

struct ReplicateBatch {
    std::vector<TimeSeries> runs;
    ReplicateSummary summary;
};

[[nodiscard]] ReplicateSummary summarize(std::span<const TimeSeries> runs);
void write_summary_csv(std::ostream& os, const ReplicateSummary& summary);

/// Replicate r runs with seed config.seed + r, all on the same network.
/// Replicates execute concurrently with OpenMP.
ReplicateBatch run_replicates(const ScenarioConfig& config, std::size_t n_replicates);
ReplicateBatch run_replicates(const ScenarioConfig& config, std::span<const std::uint64_t> seeds);
ReplicateBatch run_replicates(const ScenarioConfig& config, std::span<const std::uint64_t> seeds,
                              const ContactNetwork& net, std::span<const OutsideCity> outside,
                              std::vector<std::vector<DoseEvent>>* dose_logs = nullptr);

/// Sequential reference for run_replicates.
ReplicateBatch run_replicates_serial(const ScenarioConfig& config, std::span<const std::uint64_t> seeds);
ReplicateBatch run_replicates_serial(const ScenarioConfig& config, std::span<const std::uint64_t> seeds,
                                     const ContactNetwork& net, std::span<const OutsideCity> outside,
                                     std::vector<std::vector<DoseEvent>>* dose_logs = nullptr);

[[nodiscard]] std::vector<std::uint64_t> replicate_seeds(const ScenarioConfig& config, std::size_t n_replicates);

/// Centred moving average; the window shrinks at the ends.
[[nodiscard]] std::vector<double> moving_average(std::span<const double> series, std::size_t window);

/// Indices of local maxima whose topographic prominence is at least `min_prominence`.
[[nodiscard]] std::vector<std::size_t> find_peaks(std::span<const double> series, double min_prominence);

/// Mean spacing in days between consecutive prominent peaks of the smoothed
/// series, or nullopt when fewer than two peaks are found.
[[nodiscard]] std::optional<double> detect_endemic_period(std::span<const double> series, std::size_t window = 14,
                                                          double min_prominence = 0.02);

}  // namespace townsim
