#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace townsim {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph of who-meets-whom in the township.
///
/// Adjacency lists are sorted ascending. Construction validates symmetry,
/// absence of self-loops and of duplicate edges, so any instance that exists
/// satisfies the handshake lemma.
class ContactNetwork {
public:
    ContactNetwork() = default;

    /// Builds from an edge list (either orientation, any order).
    /// Throws InvalidParameter on self-loops, duplicates or out-of-range ids.
    ContactNetwork(std::size_t n, std::span<const Edge> edges);

    [[nodiscard]] std::size_t size() const noexcept { return adjacency_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edge_count_; }
    [[nodiscard]] std::size_t degree(NodeId i) const { return adjacency_[i].size(); }
    [[nodiscard]] std::span<const NodeId> neighbors(NodeId i) const { return adjacency_[i]; }
    [[nodiscard]] std::vector<std::size_t> degrees() const;

    /// Sorted edge list with i < j in every pair.
    [[nodiscard]] std::vector<Edge> edges() const;

private:
    std::vector<std::vector<NodeId>> adjacency_;
    std::size_t edge_count_ = 0;
};

/// Network plus the growth bookkeeping used to audit the generator.
struct GrownNetwork {
    ContactNetwork network;
    std::size_t seed_nodes = 0;
    std::size_t seed_edges = 0;
    std::vector<std::uint32_t> attachments;  // edges added by each grown node
};

/// Barabasi-Albert growth with fractional attachment count m = mean_degree / 2.
///
/// Starts from a complete graph on ceil(m) + 1 nodes. Every later node attaches
/// floor(m) edges plus one more with probability frac(m), choosing distinct
/// targets with probability proportional to degree.
GrownNetwork grow_ba(std::size_t n, double target_mean_degree, std::uint64_t seed);

inline ContactNetwork generate_ba(std::size_t n, double target_mean_degree, std::uint64_t seed) {
    return grow_ba(n, target_mean_degree, seed).network;
}

[[nodiscard]] double mean_degree(const ContactNetwork& net);

/// Discrete power-law tail fit p_k ~ k^-omega for k >= kmin.
struct PowerLawFit {
    double omega = 0.0;
    std::size_t kmin = 0;
    double fitness = 0.0;   // 1 - KS distance on the tail
    double ks_distance = 1.0;
    std::size_t tail_size = 0;
    bool degenerate = false;  // tail holds a single distinct degree
};

/// Maximum-likelihood exponent with kmin picked by minimum KS distance.
/// Throws InsufficientData when fewer than 50 observations are usable.
PowerLawFit fit_power_law(std::span<const std::size_t> degrees);

/// Same estimator with the cutoff held fixed.
PowerLawFit fit_power_law_at(std::span<const std::size_t> degrees, std::size_t kmin);

/// Hurwitz zeta sum_{k>=0} (k + a)^-s for s > 1, a > 0.
[[nodiscard]] double hurwitz_zeta(double s, double a);

/// Edge-list text format: one "i j" per line, 0-indexed, i < j, sorted.
void write_edge_list(std::ostream& os, const ContactNetwork& net);
ContactNetwork read_edge_list(std::istream& is, std::size_t n);

}  // namespace townsim
