#pragma once

#include <iosfwd>
#include <vector>

#include "townsim/epidemic.hpp"
#include "townsim/rng.hpp"

namespace townsim {

/// Well-mixed SIRS epidemic in the city travellers visit, as population fractions.
struct OutsideCity {
    double population = 4'000'000.0;
    double beta = 0.14;
    double delta = 0.05;
    double resusceptibility = 1.0 / 180.0;
    double s = 1.0;
    double i = 0.0;
    double r = 0.0;

    /// City at day 0 with `initial_cases` infected people.
    static OutsideCity seeded(double population, double beta, double delta, double resusceptibility,
                              double initial_cases);
};

/// One forward-Euler day of the mean-field SIRS map.
void step_outside_city(OutsideCity& city);

/// City state for days 0..days inclusive.
std::vector<OutsideCity> outside_trajectory(OutsideCity city, int days);

void write_outside_csv(std::ostream& os, const std::vector<OutsideCity>& trajectory);

struct TravelRates {
    double departure = 0.00012;  // per in-town agent per day
    double ret = 0.0001;         // per outside agent per day

    void validate() const;
    bool operator==(const TravelRates&) const = default;
};

/// Moves agents between the township and the city. Travellers may catch or
/// clear an infection while away; they bring it home in E, or come home in R
/// with a fresh immunity period.
void step_travel(TownState& state, const OutsideCity& city, const TravelRates& rates,
                 const EpidemicRates& epi, Rng& rng, int day);

}  // namespace townsim
