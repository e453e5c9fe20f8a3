#include "townsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "townsim/errors.hpp"
#include "townsim/rng.hpp"

namespace townsim {

ContactNetwork::ContactNetwork(std::size_t n, std::span<const Edge> edges) : adjacency_(n) {
    for (const auto& [a, b] : edges) {
        if (a >= n || b >= n)
            throw InvalidParameter("edge endpoint out of range");
        if (a == b)
            throw InvalidParameter("self-loop on node " + std::to_string(a));
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
        if (std::adjacent_find(adj.begin(), adj.end()) != adj.end())
            throw InvalidParameter("duplicate edge");
    }
    edge_count_ = edges.size();
}

std::vector<std::size_t> ContactNetwork::degrees() const {
    std::vector<std::size_t> d(adjacency_.size());
    for (std::size_t i = 0; i < adjacency_.size(); ++i)
        d[i] = adjacency_[i].size();
    return d;
}

std::vector<Edge> ContactNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId i = 0; i < adjacency_.size(); ++i)
        for (NodeId j : adjacency_[i])
            if (i < j)
                out.emplace_back(i, j);
    return out;
}

GrownNetwork grow_ba(std::size_t n, double target_mean_degree, std::uint64_t seed) {
    if (n < 3)
        throw InvalidParameter("network needs at least 3 nodes");
    if (!(target_mean_degree >= 2.0) || !(target_mean_degree < static_cast<double>(n) - 1.0))
        throw InvalidParameter("target mean degree must lie in [2, n-1)");

    const double m = target_mean_degree / 2.0;
    const auto m_floor = static_cast<std::uint32_t>(std::floor(m));
    const double m_frac = m - m_floor;
    const auto seed_nodes = static_cast<std::size_t>(std::ceil(m)) + 1;

    Rng rng = make_stream(seed, Stream::Network);
    GrownNetwork out;
    out.seed_nodes = seed_nodes;
    out.attachments.reserve(n - seed_nodes);

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(std::ceil(m)) * n);
    // Each node appears once per incident edge, so a uniform draw from this
    // list is a degree-proportional draw.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.capacity());

    for (NodeId i = 0; i < seed_nodes; ++i)
        for (NodeId j = i + 1; j < seed_nodes; ++j) {
            edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    out.seed_edges = edges.size();

    std::vector<NodeId> targets;
    for (auto v = static_cast<NodeId>(seed_nodes); v < n; ++v) {
        std::uint32_t count = m_floor;
        if (m_frac > 0.0 && rng.bernoulli(m_frac))
            ++count;
        targets.clear();
        while (targets.size() < count) {
            const NodeId t = endpoints[rng.below(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
        out.attachments.push_back(count);
    }

    out.network = ContactNetwork(n, edges);
    return out;
}

double mean_degree(const ContactNetwork& net) {
    if (net.size() == 0)
        throw InvalidParameter("empty network");
    return 2.0 * static_cast<double>(net.edge_count()) / static_cast<double>(net.size());
}

double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a > 0.0))
        throw InvalidParameter("hurwitz_zeta needs s > 1 and a > 0");
    // Direct sum of the head, Euler-Maclaurin for the remainder.
    constexpr int head = 12;
    double sum = 0.0;
    for (int k = 0; k < head; ++k)
        sum += std::pow(k + a, -s);
    const double x = head + a;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);

    // B_{2j} / (2j)!
    constexpr double coeff[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
                                1.0 / 47900160.0, -691.0 / 1307674368000.0};
    double rising = s;                  // s (s+1) ... (s+2j-2)
    double xpow = std::pow(x, -s - 1.0);  // x^{-(s+2j-1)}
    for (int j = 0; j < 6; ++j) {
        sum += coeff[j] * rising * xpow;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        xpow /= x * x;
    }
    return sum;
}

namespace {

// Degrees must be sorted ascending.
PowerLawFit fit_sorted(const std::vector<std::size_t>& sorted, std::size_t kmin) {
    auto first = std::lower_bound(sorted.begin(), sorted.end(), kmin);
    const std::span<const std::size_t> tail(&*first, static_cast<std::size_t>(sorted.end() - first));

    PowerLawFit fit;
    fit.kmin = kmin;
    fit.tail_size = tail.size();

    const double shift = static_cast<double>(kmin) - 0.5;
    double log_sum = 0.0;
    for (std::size_t k : tail)
        log_sum += std::log(static_cast<double>(k) / shift);
    const double omega0 = 1.0 + static_cast<double>(tail.size()) / log_sum;

    if (tail.front() == tail.back()) {
        fit.omega = omega0;
        fit.degenerate = true;
        fit.ks_distance = 1.0;
        fit.fitness = 0.0;
        return fit;
    }

    // The closed form seeds a search on the exact discrete log-likelihood,
    // -n ln zeta(omega, kmin) - omega sum ln k, which is concave in omega.
    double sum_log_k = 0.0;
    for (std::size_t k : tail)
        sum_log_k += std::log(static_cast<double>(k));
    const double n = static_cast<double>(tail.size());
    const double a = static_cast<double>(kmin);
    const auto neg_loglik = [&](double w) { return n * std::log(hurwitz_zeta(w, a)) + w * sum_log_k; };
    const double lo = std::max(1.0 + 1e-6, omega0 - 1.0);
    fit.omega = boost::math::tools::brent_find_minima(neg_loglik, lo, omega0 + 1.0, 40).first;

    const double norm = hurwitz_zeta(fit.omega, static_cast<double>(kmin));
    const double n_tail = static_cast<double>(tail.size());
    double fitted_cdf = 0.0;
    double ks = 0.0;
    std::size_t idx = 0;
    for (std::size_t k = kmin; k <= tail.back(); ++k) {
        fitted_cdf += std::pow(static_cast<double>(k), -fit.omega) / norm;
        while (idx < tail.size() && tail[idx] <= k)
            ++idx;
        const double empirical_cdf = static_cast<double>(idx) / n_tail;
        ks = std::max(ks, std::abs(empirical_cdf - fitted_cdf));
    }
    fit.ks_distance = ks;
    fit.fitness = std::clamp(1.0 - ks, 0.0, 1.0);
    return fit;
}

std::vector<std::size_t> sorted_degrees(std::span<const std::size_t> degrees) {
    std::vector<std::size_t> sorted(degrees.begin(), degrees.end());
    std::sort(sorted.begin(), sorted.end());
    if (!sorted.empty() && sorted.front() == 0)
        throw InvalidParameter("power-law fit needs degrees >= 1");
    return sorted;
}

constexpr std::size_t kMinTail = 50;

}  // namespace

PowerLawFit fit_power_law_at(std::span<const std::size_t> degrees, std::size_t kmin) {
    if (kmin < 1)
        throw InvalidParameter("kmin must be >= 1");
    const auto sorted = sorted_degrees(degrees);
    const auto tail = static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), kmin));
    if (tail < kMinTail)
        throw InsufficientData("power-law tail has fewer than 50 observations");
    return fit_sorted(sorted, kmin);
}

PowerLawFit fit_power_law(std::span<const std::size_t> degrees) {
    const auto sorted = sorted_degrees(degrees);
    if (sorted.size() < kMinTail)
        throw InsufficientData("power-law tail has fewer than 50 observations");

    std::vector<std::size_t> candidates(sorted.begin(), sorted.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    PowerLawFit best;
    bool have_best = false;
    for (std::size_t kmin : candidates) {
        const auto tail = static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), kmin));
        if (tail < kMinTail)
            break;
        PowerLawFit fit = fit_sorted(sorted, kmin);
        if (fit.degenerate)
            continue;
        if (!have_best || fit.ks_distance < best.ks_distance) {
            best = fit;
            have_best = true;
        }
    }
    if (!have_best)
        return fit_sorted(sorted, sorted.front());  // single distinct value: flagged degenerate
    return best;
}

void write_edge_list(std::ostream& os, const ContactNetwork& net) {
    for (const auto& [i, j] : net.edges())
        os << i << ' ' << j << '\n';
}

ContactNetwork read_edge_list(std::istream& is, std::size_t n) {
    std::vector<Edge> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        long long a = -1, b = -1;
        std::string rest;
        if (!(ls >> a >> b) || (ls >> rest) || a < 0 || b < 0 || a >= b)
            throw InvalidParameter("edge list line " + std::to_string(lineno) + ": expected \"i j\" with i < j");
        edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
    return ContactNetwork(n, edges);
}

}  // namespace townsim
