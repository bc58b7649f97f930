#include "netdyn/topology.hpp"

#include <algorithm>
#include <string>

#include "netdyn/errors.hpp"

namespace netdyn {

Topology::Topology(int node_count) : node_count_(node_count) {
    if (node_count < 0)
        throw ConfigError("topology node count cannot be negative, got " +
                          std::to_string(node_count));
    adjacency_.resize(static_cast<size_t>(node_count));
}

void Topology::check_node(int v) const {
    if (v < 0 || v >= node_count_)
        throw ConfigError("node id " + std::to_string(v) + " out of range [0, " +
                          std::to_string(node_count_) + ")");
}

const std::vector<int>& Topology::neighbors(int v) const {
    check_node(v);
    return adjacency_[static_cast<size_t>(v)];
}

int Topology::degree(int v) const {
    check_node(v);
    return static_cast<int>(adjacency_[static_cast<size_t>(v)].size());
}

bool Topology::has_edge(int a, int b) const {
    check_node(a);
    check_node(b);
    if (a == b) return false;
    const auto& nbrs = adjacency_[static_cast<size_t>(a)];
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

void Topology::add_edge(int a, int b) {
    check_node(a);
    check_node(b);
    if (a == b)
        throw ConfigError("self-loop (" + std::to_string(a) + "," +
                          std::to_string(b) + ") not allowed");
    Edge e = make_edge(a, b);
    auto pos = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (pos != edges_.end() && *pos == e)
        throw ConfigError("duplicate edge (" + std::to_string(e.first) + "," +
                          std::to_string(e.second) + ")");
    edges_.insert(pos, e);
    auto& na = adjacency_[static_cast<size_t>(a)];
    na.insert(std::lower_bound(na.begin(), na.end(), b), b);
    auto& nb = adjacency_[static_cast<size_t>(b)];
    nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
}

void Topology::remove_edge(int a, int b) {
    check_node(a);
    check_node(b);
    Edge e = make_edge(a, b);
    auto pos = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (pos == edges_.end() || *pos != e)
        throw ConfigError("edge (" + std::to_string(e.first) + "," +
                          std::to_string(e.second) + ") not present");
    edges_.erase(pos);
    auto& na = adjacency_[static_cast<size_t>(a)];
    na.erase(std::lower_bound(na.begin(), na.end(), b));
    auto& nb = adjacency_[static_cast<size_t>(b)];
    nb.erase(std::lower_bound(nb.begin(), nb.end(), a));
}

std::vector<int> Topology::degree_sequence() const {
    std::vector<int> degs(static_cast<size_t>(node_count_));
    for (int v = 0; v < node_count_; ++v)
        degs[static_cast<size_t>(v)] = degree(v);
    return degs;
}

Topology ring_lattice(int n, int k) {
    if (k % 2 != 0)
        throw ConfigError("ring lattice degree must be even, got " + std::to_string(k));
    if (k < 2 || k >= n)
        throw ConfigError("ring lattice requires 2 <= k < n, got n=" +
                          std::to_string(n) + " k=" + std::to_string(k));
    Topology g(n);
    for (int i = 0; i < n; ++i) {
        for (int d = 1; d <= k / 2; ++d) {
            int j = (i + d) % n;
            if (!g.has_edge(i, j)) g.add_edge(i, j);
        }
    }
    return g;
}

Topology complete_graph(int n) {
    Topology g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j);
    return g;
}

Topology path_graph(int n) {
    Topology g(n);
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(i, i + 1);
    return g;
}

Topology cycle_graph(int n) {
    if (n < 3) throw ConfigError("cycle graph requires n >= 3");
    Topology g = path_graph(n);
    g.add_edge(n - 1, 0);
    return g;
}

} // namespace netdyn
