#include <cmath>
#include <sstream>

#include "doctest.h"
#include "townsim/errors.hpp"
#include "townsim/scenario.hpp"
#include "townsim/travel.hpp"

using namespace townsim;

namespace {

OutsideCity default_city() {
    return OutsideCity::seeded(4'000'000.0, 0.14, 0.05, 1.0 / 180.0, 100.0);
}

}  // namespace

TEST_CASE("disease-free city stays disease free") {
    OutsideCity c;
    for (int d = 0; d < 1000; ++d)
        step_outside_city(c);
    CHECK(c.s == 1.0);
    CHECK(c.i == 0.0);
    CHECK(c.r == 0.0);
}

TEST_CASE("city fractions stay normalised") {
    const auto traj = outside_trajectory(default_city(), 1080);
    CHECK(traj.size() == 1081);
    for (const auto& c : traj) {
        CHECK(std::abs(c.s + c.i + c.r - 1.0) <= 1e-9);
        CHECK(c.i >= 0.0);
        CHECK(c.i <= 1.0);
    }
}

TEST_CASE("initial growth factor is 1 + beta - delta") {
    auto c = OutsideCity::seeded(4'000'000.0, 0.14, 0.05, 1.0 / 180.0, 1.0);
    const double i0 = c.i;
    step_outside_city(c);
    CHECK(c.i / i0 == doctest::Approx(1.09).epsilon(1e-5));
}

TEST_CASE("endemic fixed point of the city") {
    const double beta = 0.14, delta = 0.05, gamma = 1.0 / 180.0;
    const double fixed = (1.0 - delta / beta) * gamma / (gamma + delta);
    CHECK(fixed == doctest::Approx(0.0643).epsilon(1e-3));
    auto c = default_city();
    for (int d = 0; d < 3000; ++d)
        step_outside_city(c);
    CHECK(std::abs(c.i - fixed) <= 1e-3);
}

TEST_CASE("departures follow the per-day rate") {
    const std::size_t n = 10000;
    TownState s(n);
    TravelRates rates;
    rates.ret = 1.0;  // everyone is back the next day, so the pool stays at N
    Rng rng(12);
    const OutsideCity city;
    std::size_t departures = 0;
    for (int day = 0; day < 1000; ++day) {
        std::vector<bool> before(n);
        for (std::size_t i = 0; i < n; ++i)
            before[i] = s.agents[i].in_town();
        step_travel(s, city, rates, EpidemicRates{}, rng, day);
        for (std::size_t i = 0; i < n; ++i)
            departures += before[i] && !s.agents[i].in_town();
    }
    CHECK(std::abs(static_cast<double>(departures) - 1200.0) <= 3 * std::sqrt(1200.0));
}

TEST_CASE("no departures when the rate is zero") {
    TownState s(1000);
    TravelRates rates;
    rates.departure = 0.0;
    Rng rng(1);
    for (int day = 0; day < 100; ++day)
        step_travel(s, default_city(), rates, EpidemicRates{}, rng, day);
    for (const auto& a : s.agents)
        CHECK(a.in_town());
}

TEST_CASE("immune travellers cannot be infected") {
    TownState s(500);
    EpidemicRates epi;
    for (auto& a : s.agents) {
        a.location = Location::Outside;
        a.ever_vaccinated = true;
        a.doses_received = 2;
        grant_vaccine_immunity(a, 2, 0, epi);
    }
    OutsideCity city;
    city.i = 0.06;
    city.s = 0.94;
    TravelRates rates;
    rates.ret = 0.0;
    Rng rng(2);
    for (int day = 0; day < 100; ++day)
        step_travel(s, city, rates, epi, rng, day);
    for (const auto& a : s.agents) {
        CHECK(a.compartment == Compartment::Vaccinated2);
        CHECK_FALSE(a.ever_infected);
    }
}

TEST_CASE("susceptible travellers catch it at beta_o * i_o") {
    const std::size_t n = 20000;
    TownState s(n);
    for (auto& a : s.agents)
        a.location = Location::Outside;
    OutsideCity city;
    city.i = 0.06;
    city.s = 0.94;
    TravelRates rates;
    rates.ret = 0.0;
    Rng rng(3);
    step_travel(s, city, rates, EpidemicRates{}, rng, 0);
    std::size_t infected = 0;
    for (const auto& a : s.agents)
        infected += a.compartment == Compartment::Exposed;
    const double p = 0.14 * 0.06;
    CHECK(std::abs(infected - n * p) <= 3 * std::sqrt(n * p * (1 - p)));
}

TEST_CASE("recovery abroad resets natural immunity on return") {
    TownState s(1);
    Agent& a = s.agents[0];
    a.location = Location::Outside;
    enter_exposed(a);
    OutsideCity city;
    city.delta = 1.0;
    TravelRates rates;
    rates.ret = 0.0;
    EpidemicRates epi;
    Rng rng(4);
    step_travel(s, city, rates, epi, rng, 10);
    CHECK(a.compartment == Compartment::Recovered);
    rates.ret = 1.0;
    step_travel(s, city, rates, epi, rng, 50);
    CHECK(a.in_town());
    CHECK(a.compartment == Compartment::Recovered);
    CHECK(*a.immunity_expires_day == 50 + 180);
}

TEST_CASE("quarantined agents never depart") {
    TownState s(1000);
    for (auto& a : s.agents) {
        enter_exposed(a);
        a.compartment = Compartment::Quarantined;
    }
    TravelRates rates;
    rates.departure = 1.0;
    Rng rng(5);
    step_travel(s, default_city(), rates, EpidemicRates{}, rng, 0);
    for (const auto& a : s.agents)
        CHECK(a.in_town());
}

TEST_CASE("zero travel rates equal a disabled travel module") {
    ScenarioConfig off;
    off.population = 2000;
    off.days = 300;
    off.travel_enabled = false;
    ScenarioConfig zero = off;
    zero.travel_enabled = true;
    zero.travel.departure = 0.0;
    zero.travel.ret = 0.0;
    std::ostringstream a, b;
    write_timeseries_csv(a, run_scenario(off));
    write_timeseries_csv(b, run_scenario(zero));
    CHECK(a.str() == b.str());
}

TEST_CASE("travel rate validation") {
    TravelRates r;
    r.departure = -0.1;
    CHECK_THROWS_AS(r.validate(), InvalidParameter);
}
