#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "townsim/network.hpp"
#include "townsim/rng.hpp"

namespace townsim {

enum class Compartment : std::uint8_t {
    Susceptible,
    Exposed,      // infectious, not yet detected
    Quarantined,  // detected and isolated, transmits to no one
    Recovered,
    Vaccinated1,
    Vaccinated2,
    Vaccinated3,
};

inline constexpr std::size_t kCompartmentCount = 7;

[[nodiscard]] std::string_view to_string(Compartment c);

[[nodiscard]] constexpr bool is_vaccinated(Compartment c) {
    return c >= Compartment::Vaccinated1;
}

[[nodiscard]] constexpr Compartment vaccinated(int dose) {
    return static_cast<Compartment>(static_cast<int>(Compartment::Vaccinated1) + dose - 1);
}

enum class Location : std::uint8_t { InTown, Outside };

enum class ImmunityMode : std::uint8_t { Homogeneous, RuleBased };

// Fixed: immunity lasts exactly the configured number of days.
// Exponential: immunity ends each day with probability 1 / duration.
enum class Waning : std::uint8_t { Fixed, Exponential };

struct Agent {
    NodeId id = 0;
    Compartment compartment = Compartment::Susceptible;
    Location location = Location::InTown;
    std::uint8_t doses_received = 0;
    std::array<bool, 3> willing{};
    std::optional<int> immunity_expires_day;  // fixed waning of R and V states
    std::optional<int> next_dose_due_day;
    bool ever_infected = false;
    bool ever_vaccinated = false;

    std::uint16_t infections = 0;
    int immunity_start_day = -1;
    int immunity_days = 0;
    int last_dose_day = -1;
    bool recovered_abroad = false;

    [[nodiscard]] bool in_town() const { return location == Location::InTown; }
    [[nodiscard]] bool infected() const {
        return compartment == Compartment::Exposed || compartment == Compartment::Quarantined;
    }
};

struct EpidemicRates {
    double beta = 0.14;    // per infectious contact per day
    double delta = 0.05;   // recovery, per day
    double lambda = 0.01;  // pre-symptomatic testing, per day
    double tau = 1.0 / 14.0;
    ImmunityMode immunity_mode = ImmunityMode::Homogeneous;
    int natural_immunity_days = 180;  // homogeneous mode
    Waning natural_waning = Waning::Fixed;
    int vaccine_immunity_days = 180;
    Waning vaccine_waning = Waning::Fixed;

    /// E -> U probability, clamped to 1.
    [[nodiscard]] double detection_probability() const;
    void validate() const;
    bool operator==(const EpidemicRates&) const = default;
};

/// Every agent in the township plus running totals.
struct TownState {
    std::vector<Agent> agents;
    std::uint64_t cumulative_doses = 0;

    explicit TownState(std::size_t n = 0);
    [[nodiscard]] std::size_t size() const { return agents.size(); }
};

/// One row of the output time series.
struct DailyRecord {
    int day = 0;
    std::array<std::uint32_t, kCompartmentCount> counts{};  // in-town agents only
    std::uint32_t outside = 0;
    double infected = 0.0;              // (E + U) / N
    double mean_degree_infected = 0.0;  // 0 when nobody is infected
    std::uint64_t cumulative_doses = 0;
    double outside_prevalence = 0.0;

    [[nodiscard]] std::uint32_t count(Compartment c) const { return counts[static_cast<std::size_t>(c)]; }
    [[nodiscard]] std::uint64_t total() const;
};

/// 1 - (1 - beta)^k.
[[nodiscard]] double infection_probability(int infectious_neighbors, double beta);

/// Days of protection after recovering from an infection.
[[nodiscard]] int natural_immunity_duration(bool ever_vaccinated, bool prior_infection, ImmunityMode mode,
                                            int homogeneous_days = 180);

/// Basic reproduction number beta / delta.
[[nodiscard]] double r0(double beta, double delta);

/// Moves `count` distinct random susceptible in-town agents to Exposed.
/// Throws InvalidParameter when fewer susceptibles exist.
void seed_infections(TownState& state, std::size_t count, Rng& rng);

// State-entry helpers shared with the travel and vaccination modules.
void enter_exposed(Agent& agent);
void enter_recovered(Agent& agent, int day, const EpidemicRates& rates);
void grant_vaccine_immunity(Agent& agent, int dose, int day, const EpidemicRates& rates);

/// Advances the township one day: transmission, detection, recovery, then
/// waning of natural and vaccine immunity. Transmission pressure is computed
/// from the compartments at the start of the day.
DailyRecord step_day(TownState& state, const ContactNetwork& net, const EpidemicRates& rates, Rng& rng, int day);

/// Counts and derived quantities of the current state.
DailyRecord snapshot(const TownState& state, const ContactNetwork& net, int day);

/// Throws InconsistentState naming the first agent that violates an invariant.
void check_invariants(const TownState& state, const EpidemicRates& rates);

}  // namespace townsim
