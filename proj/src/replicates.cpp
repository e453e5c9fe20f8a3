#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>

#include "townsim/csv.hpp"
#include "townsim/errors.hpp"
#include "townsim/scenario.hpp"

namespace townsim {

namespace {

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

ScenarioConfig with_seed(ScenarioConfig c, std::uint64_t seed) {
    c.seed = seed;
    return c;
}

}  // namespace

std::vector<std::uint64_t> replicate_seeds(const ScenarioConfig& config, std::size_t n_replicates) {
    if (n_replicates < 1)
        throw InvalidParameter("n_replicates must be at least 1");
    std::vector<std::uint64_t> seeds(n_replicates);
    for (std::size_t r = 0; r < n_replicates; ++r)
        seeds[r] = config.seed + r;
    return seeds;
}

ReplicateSummary summarize(std::span<const TimeSeries> runs) {
    ReplicateSummary s;
    if (runs.empty())
        return s;
    const std::size_t days = runs.front().size();
    s.mean.resize(days);
    s.lower.resize(days);
    s.upper.resize(days);
    std::vector<double> column(runs.size());
    for (std::size_t d = 0; d < days; ++d) {
        double sum = 0.0;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            column[r] = runs[r].rows.at(d).infected;
            sum += column[r];
        }
        std::sort(column.begin(), column.end());
        s.mean[d] = sum / static_cast<double>(runs.size());
        s.lower[d] = quantile_sorted(column, 0.05);
        s.upper[d] = quantile_sorted(column, 0.95);
    }
    return s;
}

void write_summary_csv(std::ostream& os, const ReplicateSummary& s) {
    os << "day,mean_infected,lower_infected,upper_infected\n";
    for (std::size_t d = 0; d < s.mean.size(); ++d)
        os << d << ',' << csv::number(s.mean[d]) << ',' << csv::number(s.lower[d]) << ','
           << csv::number(s.upper[d]) << '\n';
}

ReplicateBatch run_replicates_serial(const ScenarioConfig& config, std::span<const std::uint64_t> seeds,
                                     const ContactNetwork& net, std::span<const OutsideCity> outside,
                                     std::vector<std::vector<DoseEvent>>* dose_logs) {
    if (seeds.empty())
        throw InvalidParameter("n_replicates must be at least 1");
    if (dose_logs)
        dose_logs->assign(seeds.size(), {});
    ReplicateBatch batch;
    batch.runs.reserve(seeds.size());
    for (std::size_t r = 0; r < seeds.size(); ++r)
        batch.runs.push_back(
            run_scenario(with_seed(config, seeds[r]), net, outside, dose_logs ? &(*dose_logs)[r] : nullptr));
    batch.summary = summarize(batch.runs);
    return batch;
}

ReplicateBatch run_replicates(const ScenarioConfig& config, std::span<const std::uint64_t> seeds,
                              const ContactNetwork& net, std::span<const OutsideCity> outside,
                              std::vector<std::vector<DoseEvent>>* dose_logs) {
    if (seeds.empty())
        throw InvalidParameter("n_replicates must be at least 1");
    if (dose_logs)
        dose_logs->assign(seeds.size(), {});
    ReplicateBatch batch;
    batch.runs.resize(seeds.size());

    // Exceptions must not escape an OpenMP region; keep the first and rethrow after the join.
    std::exception_ptr failure;
    const auto n = static_cast<long>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long r = 0; r < n; ++r) {
        const auto idx = static_cast<std::size_t>(r);
        try {
            batch.runs[idx] = run_scenario(with_seed(config, seeds[idx]), net, outside,
                                           dose_logs ? &(*dose_logs)[idx] : nullptr);
        } catch (...) {
#pragma omp critical(townsim_replicate_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);

    batch.summary = summarize(batch.runs);
    return batch;
}

ReplicateBatch run_replicates_serial(const ScenarioConfig& config, std::span<const std::uint64_t> seeds) {
    config.validate();
    const auto net = build_network(config);
    const auto outside = build_outside_trajectory(config);
    return run_replicates_serial(config, seeds, net, outside);
}

ReplicateBatch run_replicates(const ScenarioConfig& config, std::span<const std::uint64_t> seeds) {
    config.validate();
    const auto net = build_network(config);
    const auto outside = build_outside_trajectory(config);
    return run_replicates(config, seeds, net, outside);
}

ReplicateBatch run_replicates(const ScenarioConfig& config, std::size_t n_replicates) {
    const auto seeds = replicate_seeds(config, n_replicates);
    return run_replicates(config, seeds);
}

}  // namespace townsim
