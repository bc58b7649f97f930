#pragma once

#include <utility>
#include <vector>

namespace netdyn {

// Undirected edge stored with endpoints ordered (first < second).
using Edge = std::pair<int, int>;

// Normalize an endpoint pair into canonical edge form.
inline Edge make_edge(int a, int b) {
    return a < b ? Edge{a, b} : Edge{b, a};
}

// Simple undirected graph on nodes 0..N-1. Keeps the edge set (sorted,
// canonical order) and per-node neighbor lists in sync, so both uniform
// edge sampling and neighbor iteration are cheap. No self-loops, no
// duplicate edges; every operation on the edge set preserves that.
class Topology {
public:
    explicit Topology(int node_count);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    // Sorted canonical edge list; iteration order is independent of the
    // order in which edges were added.
    const std::vector<Edge>& edges() const { return edges_; }

    // Ascending neighbor ids of v.
    const std::vector<int>& neighbors(int v) const;

    int degree(int v) const;
    bool has_edge(int a, int b) const;

    // Both throw ConfigError on invalid endpoints, self-loops, duplicate
    // insertions or removal of absent edges.
    void add_edge(int a, int b);
    void remove_edge(int a, int b);

    std::vector<int> degree_sequence() const;

    bool operator==(const Topology& other) const {
        return node_count_ == other.node_count_ && edges_ == other.edges_;
    }

private:
    void check_node(int v) const;

    int node_count_ = 0;
    std::vector<Edge> edges_;                // sorted
    std::vector<std::vector<int>> adjacency_; // each list sorted
};

// Generators -----------------------------------------------------------

// Ring lattice: node i connected to i+-1 .. i+-k/2 (mod n). Requires k
// even and 2 <= k < n; the result is k-regular with n*k/2 edges.
Topology ring_lattice(int n, int k);

Topology complete_graph(int n);
Topology path_graph(int n);
Topology cycle_graph(int n);

} // namespace netdyn
