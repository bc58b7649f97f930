#pragma once

#include <optional>

#include "netdyn/topology.hpp"

namespace netdyn {

// True iff a BFS from node 0 reaches every node. A single node with no
// edges counts as connected.
bool is_connected(const Topology& g);

// Longest shortest-path length over all node pairs. Throws DomainError
// when g is disconnected.
int diameter(const Topology& g);

// Mean of the local clustering coefficients (nodes of degree < 2
// contribute 0).
double avg_clustering(const Topology& g);

// Length of the shortest cycle, or nullopt when the graph is acyclic.
std::optional<int> girth(const Topology& g);

} // namespace netdyn
