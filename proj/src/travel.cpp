#include "townsim/travel.hpp"

#include <algorithm>
#include <ostream>

#include "townsim/csv.hpp"
#include "townsim/errors.hpp"

namespace townsim {

OutsideCity OutsideCity::seeded(double population, double beta, double delta, double resusceptibility,
                                double initial_cases) {
    if (!(population > 0.0) || initial_cases < 0.0 || initial_cases > population)
        throw InvalidParameter("outside city needs population > 0 and 0 <= cases <= population");
    OutsideCity c;
    c.population = population;
    c.beta = beta;
    c.delta = delta;
    c.resusceptibility = resusceptibility;
    c.i = initial_cases / population;
    c.s = 1.0 - c.i;
    c.r = 0.0;
    return c;
}

void step_outside_city(OutsideCity& c) {
    const double infection = c.beta * c.s * c.i;
    const double recovery = c.delta * c.i;
    const double waning = c.resusceptibility * c.r;
    double s = std::clamp(c.s - infection + waning, 0.0, 1.0);
    double i = std::clamp(c.i + infection - recovery, 0.0, 1.0);
    double r = std::clamp(c.r + recovery - waning, 0.0, 1.0);
    const double total = s + i + r;
    c.s = s / total;
    c.i = i / total;
    c.r = r / total;
}

std::vector<OutsideCity> outside_trajectory(OutsideCity city, int days) {
    std::vector<OutsideCity> out;
    out.reserve(static_cast<std::size_t>(days) + 1);
    out.push_back(city);
    for (int d = 1; d <= days; ++d) {
        step_outside_city(city);
        out.push_back(city);
    }
    return out;
}

void write_outside_csv(std::ostream& os, const std::vector<OutsideCity>& trajectory) {
    os << "day,s_o,i_o,r_o\n";
    for (std::size_t d = 0; d < trajectory.size(); ++d) {
        const auto& c = trajectory[d];
        os << d << ',' << csv::number(c.s) << ',' << csv::number(c.i) << ',' << csv::number(c.r) << '\n';
    }
}

void TravelRates::validate() const {
    if (!(departure >= 0.0 && departure <= 1.0))
        throw InvalidParameter("departure_rate must lie in [0,1]");
    if (!(ret >= 0.0 && ret <= 1.0))
        throw InvalidParameter("return_rate must lie in [0,1]");
}

void step_travel(TownState& state, const OutsideCity& city, const TravelRates& rates, const EpidemicRates& epi,
                 Rng& rng, int day) {
    const double catch_prob = std::clamp(city.beta * city.i, 0.0, 1.0);
    for (auto& a : state.agents) {
        if (a.in_town()) {
            if (a.compartment != Compartment::Quarantined && rng.bernoulli(rates.departure))
                a.location = Location::Outside;
            continue;
        }
        if (rng.bernoulli(rates.ret)) {
            a.location = Location::InTown;
            if (a.compartment == Compartment::Recovered && a.recovered_abroad) {
                enter_recovered(a, day, epi);
                a.recovered_abroad = false;
            }
            continue;
        }
        // Only agents without live immunity can catch it outside.
        if (a.compartment == Compartment::Susceptible) {
            if (rng.bernoulli(catch_prob))
                enter_exposed(a);
        } else if (a.compartment == Compartment::Exposed) {
            if (rng.bernoulli(city.delta)) {
                enter_recovered(a, day, epi);
                a.recovered_abroad = true;
            }
        }
    }
}

}  // namespace townsim
