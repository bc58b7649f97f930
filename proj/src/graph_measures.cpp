#include "netdyn/graph_measures.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

#include "netdyn/errors.hpp"

namespace netdyn {

namespace {

constexpr int kUnreached = -1;

// Distances from src; unreached nodes stay at kUnreached. An optional
// edge can be excluded, which the girth computation uses.
std::vector<int> bfs_distances(const Topology& g, int src,
                               std::optional<Edge> skip = std::nullopt) {
    std::vector<int> dist(static_cast<size_t>(g.node_count()), kUnreached);
    dist[static_cast<size_t>(src)] = 0;
    std::queue<int> queue;
    queue.push(src);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop();
        for (int v : g.neighbors(u)) {
            if (skip && make_edge(u, v) == *skip) continue;
            if (dist[static_cast<size_t>(v)] == kUnreached) {
                dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
                queue.push(v);
            }
        }
    }
    return dist;
}

} // namespace

bool is_connected(const Topology& g) {
    if (g.node_count() == 0) return true;
    auto dist = bfs_distances(g, 0);
    return std::none_of(dist.begin(), dist.end(),
                        [](int d) { return d == kUnreached; });
}

int diameter(const Topology& g) {
    int best = 0;
    for (int src = 0; src < g.node_count(); ++src) {
        auto dist = bfs_distances(g, src);
        for (int d : dist) {
            if (d == kUnreached)
                throw DomainError("diameter undefined: graph is disconnected");
            best = std::max(best, d);
        }
    }
    return best;
}

double avg_clustering(const Topology& g) {
    if (g.node_count() == 0) return 0.0;
    double total = 0.0;
    for (int v = 0; v < g.node_count(); ++v) {
        const auto& nbrs = g.neighbors(v);
        size_t deg = nbrs.size();
        if (deg < 2) continue;
        int links = 0;
        for (size_t i = 0; i < deg; ++i)
            for (size_t j = i + 1; j < deg; ++j)
                if (g.has_edge(nbrs[i], nbrs[j])) ++links;
        total += 2.0 * links / (static_cast<double>(deg) * (static_cast<double>(deg) - 1.0));
    }
    return total / g.node_count();
}

std::optional<int> girth(const Topology& g) {
    // Shortest cycle through edge (u,v) = 1 + shortest u-v path avoiding
    // that edge; minimize over all edges.
    int best = std::numeric_limits<int>::max();
    for (const Edge& e : g.edges()) {
        auto dist = bfs_distances(g, e.first, e);
        int d = dist[static_cast<size_t>(e.second)];
        if (d != kUnreached) best = std::min(best, d + 1);
    }
    if (best == std::numeric_limits<int>::max()) return std::nullopt;
    return best;
}

} // namespace netdyn
