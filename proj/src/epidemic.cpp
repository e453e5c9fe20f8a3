#include "townsim/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "townsim/errors.hpp"

namespace townsim {

std::string_view to_string(Compartment c) {
    switch (c) {
        case Compartment::Susceptible: return "S";
        case Compartment::Exposed: return "E";
        case Compartment::Quarantined: return "U";
        case Compartment::Recovered: return "R";
        case Compartment::Vaccinated1: return "V1";
        case Compartment::Vaccinated2: return "V2";
        case Compartment::Vaccinated3: return "V3";
    }
    return "?";
}

double EpidemicRates::detection_probability() const {
    return std::min(1.0, lambda + tau);
}

void EpidemicRates::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidParameter(std::string(name) + " must lie in [0,1]");
    };
    prob(beta, "beta");
    prob(delta, "delta");
    prob(lambda, "testing_rate");
    prob(tau, "tau");
    if (natural_immunity_days < 1 || vaccine_immunity_days < 1)
        throw InvalidParameter("immunity_days and vaccine_immunity_days must be at least 1");
}

TownState::TownState(std::size_t n) : agents(n) {
    for (std::size_t i = 0; i < n; ++i)
        agents[i].id = static_cast<NodeId>(i);
}

std::uint64_t DailyRecord::total() const {
    std::uint64_t sum = outside;
    for (auto c : counts)
        sum += c;
    return sum;
}

double infection_probability(int infectious_neighbors, double beta) {
    if (infectious_neighbors <= 0)
        return 0.0;
    return 1.0 - std::pow(1.0 - beta, infectious_neighbors);
}

int natural_immunity_duration(bool ever_vaccinated, bool prior_infection, ImmunityMode mode, int homogeneous_days) {
    if (mode == ImmunityMode::Homogeneous)
        return homogeneous_days;
    if (ever_vaccinated)
        return prior_infection ? 200 : 180;
    return prior_infection ? 180 : 140;
}

double r0(double beta, double delta) {
    if (!(delta > 0.0))
        throw InvalidParameter("r0 needs a positive recovery rate");
    return beta / delta;
}

void enter_exposed(Agent& agent) {
    agent.compartment = Compartment::Exposed;
    agent.ever_infected = true;
    ++agent.infections;
    agent.immunity_expires_day.reset();
    agent.recovered_abroad = false;
}

void enter_recovered(Agent& agent, int day, const EpidemicRates& rates) {
    agent.compartment = Compartment::Recovered;
    agent.immunity_days = natural_immunity_duration(agent.ever_vaccinated, agent.infections > 1,
                                                    rates.immunity_mode, rates.natural_immunity_days);
    agent.immunity_start_day = day;
    if (rates.natural_waning == Waning::Fixed)
        agent.immunity_expires_day = day + agent.immunity_days;
    else
        agent.immunity_expires_day.reset();
}

void grant_vaccine_immunity(Agent& agent, int dose, int day, const EpidemicRates& rates) {
    agent.compartment = vaccinated(dose);
    agent.immunity_days = rates.vaccine_immunity_days;
    agent.immunity_start_day = day;
    if (rates.vaccine_waning == Waning::Fixed)
        agent.immunity_expires_day = day + agent.immunity_days;
    else
        agent.immunity_expires_day.reset();
}

void seed_infections(TownState& state, std::size_t count, Rng& rng) {
    if (count == 0)
        return;
    std::vector<NodeId> pool;
    for (const auto& a : state.agents)
        if (a.compartment == Compartment::Susceptible && a.in_town())
            pool.push_back(a.id);
    if (pool.size() < count)
        throw InvalidParameter("cannot seed " + std::to_string(count) + " infections among " +
                               std::to_string(pool.size()) + " susceptibles");
    // Partial Fisher-Yates: the first `count` slots are a uniform sample.
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
        enter_exposed(state.agents[pool[i]]);
    }
}

namespace {

bool immunity_lapses(const Agent& a, Waning waning, int day, Rng& rng) {
    if (waning == Waning::Fixed)
        return a.immunity_expires_day && day >= *a.immunity_expires_day;
    // Entered today: residence is at least one day.
    if (a.immunity_start_day >= day)
        return false;
    return rng.bernoulli(1.0 / a.immunity_days);
}

void become_susceptible(Agent& a) {
    a.compartment = Compartment::Susceptible;
    a.immunity_expires_day.reset();
    a.recovered_abroad = false;
}

}  // namespace

DailyRecord step_day(TownState& state, const ContactNetwork& net, const EpidemicRates& rates, Rng& rng, int day) {
    if (day < 0)
        throw InvalidParameter("day must be non-negative");
    auto& agents = state.agents;
    const std::size_t n = agents.size();

    // (1) S -> E. Pressure counts in-town Exposed neighbours as of the start of the day.
    std::vector<std::uint16_t> pressure(n, 0);
    for (const auto& a : agents) {
        if (a.compartment != Compartment::Exposed || !a.in_town())
            continue;
        for (NodeId j : net.neighbors(a.id))
            ++pressure[j];
    }
    for (auto& a : agents) {
        if (pressure[a.id] == 0 || a.compartment != Compartment::Susceptible || !a.in_town())
            continue;
        if (rng.bernoulli(infection_probability(pressure[a.id], rates.beta)))
            enter_exposed(a);
    }
    check_invariants(state, rates);

    // (2) E -> U
    const double detect = rates.detection_probability();
    for (auto& a : agents)
        if (a.compartment == Compartment::Exposed && a.in_town() && rng.bernoulli(detect))
            a.compartment = Compartment::Quarantined;
    check_invariants(state, rates);

    // (3) E -> R and U -> R
    for (auto& a : agents)
        if (a.infected() && a.in_town() && rng.bernoulli(rates.delta))
            enter_recovered(a, day, rates);
    check_invariants(state, rates);

    // (4) R -> S, on every agent: immunity clocks keep running while travelling.
    for (auto& a : agents)
        if (a.compartment == Compartment::Recovered && immunity_lapses(a, rates.natural_waning, day, rng))
            become_susceptible(a);
    check_invariants(state, rates);

    // (5) V_i -> S
    for (auto& a : agents)
        if (is_vaccinated(a.compartment) && immunity_lapses(a, rates.vaccine_waning, day, rng))
            become_susceptible(a);
    check_invariants(state, rates);

    return snapshot(state, net, day);
}

DailyRecord snapshot(const TownState& state, const ContactNetwork& net, int day) {
    DailyRecord rec;
    rec.day = day;
    std::uint64_t infected_degree = 0;
    std::uint32_t infected = 0;
    for (const auto& a : state.agents) {
        if (!a.in_town()) {
            ++rec.outside;
            continue;
        }
        ++rec.counts[static_cast<std::size_t>(a.compartment)];
        if (a.infected()) {
            ++infected;
            infected_degree += net.degree(a.id);
        }
    }
    const auto n = static_cast<double>(state.size());
    rec.infected = n > 0 ? infected / n : 0.0;
    rec.mean_degree_infected = infected > 0 ? static_cast<double>(infected_degree) / infected : 0.0;
    rec.cumulative_doses = state.cumulative_doses;
    return rec;
}

void check_invariants(const TownState& state, const EpidemicRates& rates) {
    for (const auto& a : state.agents) {
        const char* problem = nullptr;
        if (a.doses_received > 3)
            problem = "more than three doses";
        else if (is_vaccinated(a.compartment) && !a.ever_vaccinated)
            problem = "vaccinated compartment without a recorded dose";
        else if (is_vaccinated(a.compartment) &&
                 a.doses_received < static_cast<int>(a.compartment) - static_cast<int>(Compartment::Vaccinated1) + 1)
            problem = "vaccinated compartment above doses received";
        else if (a.infected() && !a.ever_infected)
            problem = "infected without ever_infected";
        else if (a.compartment == Compartment::Quarantined && !a.in_town())
            problem = "quarantined agent outside town";
        else if (a.compartment == Compartment::Recovered && rates.natural_waning == Waning::Fixed &&
                 !a.immunity_expires_day)
            problem = "recovered agent without an immunity timer";
        else if (is_vaccinated(a.compartment) && rates.vaccine_waning == Waning::Fixed && !a.immunity_expires_day)
            problem = "vaccinated agent without an immunity timer";
        if (problem)
            throw InconsistentState("agent " + std::to_string(a.id) + ": " + problem);
    }
}

}  // namespace townsim
