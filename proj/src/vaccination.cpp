#include "townsim/vaccination.hpp"

#include <algorithm>
#include <string>

#include "townsim/errors.hpp"

namespace townsim {

void VaccineSchedule::validate() const {
    auto prob = [](double p, const std::string& name) {
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidParameter(name + " must lie in [0,1]");
    };
    prob(uptake, "uptake");
    for (std::size_t d = 0; d < efficacy.size(); ++d)
        prob(efficacy[d], "efficacy" + std::to_string(d + 1));
    if (initial_doses > daily_cap)
        throw InvalidParameter("initial_doses must not exceed daily_cap");
    if (dose2_interval < 1 || dose3_interval < 1)
        throw InvalidParameter("dose intervals must be at least 1 day");
    if (max_doses < 0 || max_doses > 3)
        throw InvalidParameter("max_doses must lie in [0,3]");
    if (start_day < 0)
        throw InvalidParameter("vaccine start day must be non-negative");
}

std::uint32_t daily_supply(int day, const VaccineSchedule& sched) {
    if (day < sched.start_day)
        return 0;
    std::uint64_t supply = sched.initial_doses;
    for (int d = sched.start_day; d < day && supply < sched.daily_cap; ++d)
        supply *= 2;
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(supply, sched.daily_cap));
}

void assign_willingness(TownState& state, double uptake, Rng& rng) {
    if (!(uptake >= 0.0 && uptake <= 1.0))
        throw InvalidParameter("uptake must lie in [0,1]");
    for (auto& a : state.agents)
        for (auto& w : a.willing)
            w = rng.bernoulli(uptake);
}

namespace {

bool willing_through(const Agent& a, int dose) {
    for (int d = 0; d < dose; ++d)
        if (!a.willing[d])
            return false;
    return true;
}

bool can_receive_booster(const Agent& a) {
    return a.in_town() && (a.compartment == Compartment::Susceptible || is_vaccinated(a.compartment));
}

}  // namespace

std::uint32_t administer_doses(TownState& state, const ContactNetwork& net, int day, const VaccineSchedule& sched,
                               const EpidemicRates& rates, Rng& rng, std::vector<DoseEvent>* log) {
    std::uint32_t remaining = daily_supply(day, sched);
    if (remaining == 0 || sched.max_doses == 0)
        return 0;
    std::uint32_t used = 0;

    auto give = [&](Agent& a, int dose) {
        ++a.doses_received;
        a.ever_vaccinated = true;
        a.last_dose_day = day;
        const bool ok = rng.bernoulli(sched.efficacy[dose - 1]);
        if (ok)
            grant_vaccine_immunity(a, dose, day, rates);
        if (dose < sched.max_doses && willing_through(a, dose + 1))
            a.next_dose_due_day = day + (dose == 1 ? sched.dose2_interval : sched.dose3_interval);
        else
            a.next_dose_due_day.reset();
        ++state.cumulative_doses;
        ++used;
        --remaining;
        if (log)
            log->push_back({day, a.id, dose, ok});
    };

    // Boosters, longest-waiting first.
    for (int dose = 3; dose >= 2 && remaining > 0; --dose) {
        if (dose > sched.max_doses)
            continue;
        std::vector<Agent*> due;
        for (auto& a : state.agents)
            if (a.doses_received == dose - 1 && a.next_dose_due_day && *a.next_dose_due_day <= day &&
                willing_through(a, dose) && can_receive_booster(a))
                due.push_back(&a);
        std::stable_sort(due.begin(), due.end(), [](const Agent* l, const Agent* r) {
            return *l->next_dose_due_day < *r->next_dose_due_day;
        });
        for (Agent* a : due) {
            if (remaining == 0)
                break;
            give(*a, dose);
        }
    }
    if (remaining == 0)
        return used;

    std::vector<NodeId> first;
    for (const auto& a : state.agents)
        if (a.doses_received == 0 && a.willing[0] && a.in_town() && a.compartment == Compartment::Susceptible)
            first.push_back(a.id);
    const std::size_t take = std::min<std::size_t>(remaining, first.size());
    if (sched.first_dose_order == FirstDoseOrder::DegreeDesc) {
        std::stable_sort(first.begin(), first.end(),
                         [&](NodeId l, NodeId r) { return net.degree(l) > net.degree(r); });
    } else {
        for (std::size_t i = 0; i < take; ++i)
            std::swap(first[i], first[i + rng.below(first.size() - i)]);
    }
    for (std::size_t i = 0; i < take; ++i)
        give(state.agents[first[i]], 1);
    return used;
}

}  // namespace townsim
