#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "townsim/epidemic.hpp"
#include "townsim/network.hpp"
#include "townsim/rng.hpp"

namespace townsim {

enum class FirstDoseOrder : std::uint8_t { Random, DegreeDesc };

/// Supply ramp, dose intervals, uptake and per-dose efficacy of the program.
struct VaccineSchedule {
    int start_day = 60;
    std::uint32_t initial_doses = 10;
    std::uint32_t daily_cap = 100;
    int dose2_interval = 28;   // days after dose 1
    int dose3_interval = 180;  // days after dose 2
    int max_doses = 3;
    double uptake = 0.9;       // independent willingness per dose
    std::array<double, 3> efficacy{0.92, 0.86, 0.96};
    FirstDoseOrder first_dose_order = FirstDoseOrder::Random;

    void validate() const;
    bool operator==(const VaccineSchedule&) const = default;
};

/// Doses delivered on `day`: zero before the start, then doubling from the
/// initial amount until the cap is reached.
[[nodiscard]] std::uint32_t daily_supply(int day, const VaccineSchedule& sched);

/// Independent Bernoulli(uptake) willingness draw for each agent and dose.
void assign_willingness(TownState& state, double uptake, Rng& rng);

struct DoseEvent {
    int day = 0;
    NodeId agent = 0;
    int dose = 0;
    bool succeeded = false;
};

/// Hands out today's supply: due third doses, then due second doses, then
/// first doses to willing never-dosed susceptibles. Returns doses used.
std::uint32_t administer_doses(TownState& state, const ContactNetwork& net, int day, const VaccineSchedule& sched,
                               const EpidemicRates& rates, Rng& rng, std::vector<DoseEvent>* log = nullptr);

}  // namespace townsim
