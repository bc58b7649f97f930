#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace support {

using netdyn::Edge;

std::vector<std::vector<double>> laplacian_matrix(const Topology& g) {
    const int n = g.node_count();
    std::vector<std::vector<double>> m(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
    for (const Edge& e : g.edges()) {
        const auto a = static_cast<size_t>(e.first);
        const auto b = static_cast<size_t>(e.second);
        m[a][b] -= 1.0;
        m[b][a] -= 1.0;
        m[a][a] += 1.0;
        m[b][b] += 1.0;
    }
    return m;
}

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const size_t n = a.size();
    std::vector<double> eig(n);
    if (n == 0) return eig;

    double scale = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (std::sqrt(off) <= 1e-13 * scale * static_cast<double>(n)) break;

        for (size_t p = 0; p + 1 < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (std::abs(apq) <= 1e-15 * scale) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (size_t k = 0; k < n; ++k) { // column rotation
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; ++k) { // row rotation
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    for (size_t i = 0; i < n; ++i) eig[i] = a[i][i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

double ref_eigenratio(const Topology& g) {
    const std::vector<double> eig = jacobi_eigenvalues(laplacian_matrix(g));
    if (eig.size() < 2 || eig[1] < 1e-9)
        return std::numeric_limits<double>::infinity();
    return eig.back() / eig[1];
}

bool ref_connected(const Topology& g) {
    const int n = g.node_count();
    if (n <= 1) return true;
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    int components = n;
    for (const Edge& e : g.edges()) {
        const int ra = find(e.first), rb = find(e.second);
        if (ra != rb) {
            parent[static_cast<size_t>(ra)] = rb;
            --components;
        }
    }
    return components == 1;
}

std::optional<int> ref_diameter(const Topology& g) {
    const int n = g.node_count();
    if (n == 0) return 0;
    const int inf = n + 1;
    std::vector<std::vector<int>> d(static_cast<size_t>(n),
                                    std::vector<int>(static_cast<size_t>(n), inf));
    for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)][static_cast<size_t>(i)] = 0;
    for (const Edge& e : g.edges()) {
        d[static_cast<size_t>(e.first)][static_cast<size_t>(e.second)] = 1;
        d[static_cast<size_t>(e.second)][static_cast<size_t>(e.first)] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int via = d[static_cast<size_t>(i)][static_cast<size_t>(k)] +
                                d[static_cast<size_t>(k)][static_cast<size_t>(j)];
                if (via < d[static_cast<size_t>(i)][static_cast<size_t>(j)])
                    d[static_cast<size_t>(i)][static_cast<size_t>(j)] = via;
            }
    int best = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int dij = d[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (dij >= inf) return std::nullopt;
            best = std::max(best, dij);
        }
    return best;
}

double ref_clustering(const Topology& g) {
    const int n = g.node_count();
    if (n == 0) return 0.0;
    std::vector<std::vector<char>> adj(static_cast<size_t>(n),
                                       std::vector<char>(static_cast<size_t>(n), 0));
    for (const Edge& e : g.edges()) {
        adj[static_cast<size_t>(e.first)][static_cast<size_t>(e.second)] = 1;
        adj[static_cast<size_t>(e.second)][static_cast<size_t>(e.first)] = 1;
    }
    double sum = 0.0;
    for (int v = 0; v < n; ++v) {
        std::vector<int> nbrs;
        for (int u = 0; u < n; ++u)
            if (adj[static_cast<size_t>(v)][static_cast<size_t>(u)]) nbrs.push_back(u);
        const int deg = static_cast<int>(nbrs.size());
        if (deg < 2) continue;
        int links = 0;
        for (size_t i = 0; i < nbrs.size(); ++i)
            for (size_t j = i + 1; j < nbrs.size(); ++j)
                links += adj[static_cast<size_t>(nbrs[i])][static_cast<size_t>(nbrs[j])];
        sum += 2.0 * links / (static_cast<double>(deg) * (deg - 1));
    }
    return sum / n;
}

std::optional<int> ref_girth(const Topology& g) {
    const int n = g.node_count();
    int best = n + 1;
    std::vector<int> dist(static_cast<size_t>(n));
    std::vector<int> parent(static_cast<size_t>(n));
    for (int s = 0; s < n && best > 3; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        dist[static_cast<size_t>(s)] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int w : g.neighbors(u)) {
                if (dist[static_cast<size_t>(w)] < 0) {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                    parent[static_cast<size_t>(w)] = u;
                    queue.push_back(w);
                } else if (w != parent[static_cast<size_t>(u)]) {
                    // Non-tree edge: closes a cycle through s. Minimising
                    // over every start vertex makes the bound exact.
                    best = std::min(best,
                                    dist[static_cast<size_t>(u)] +
                                        dist[static_cast<size_t>(w)] + 1);
                }
            }
        }
    }
    if (best > n) return std::nullopt;
    return best;
}

Topology random_connected_graph(int n, int extra, std::mt19937_64& rng) {
    Topology g(n);
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        g.add_edge(v, pick(rng));
    }
    const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    std::uniform_int_distribution<int> node(0, n > 0 ? n - 1 : 0);
    for (int i = 0; i < extra && g.edge_count() < max_edges; ++i) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            const int a = node(rng), b = node(rng);
            if (a != b && !g.has_edge(a, b)) {
                g.add_edge(a, b);
                break;
            }
        }
    }
    return g;
}

Topology random_graph(int n, double p, std::mt19937_64& rng) {
    Topology g(n);
    std::bernoulli_distribution coin(p);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(rng)) g.add_edge(a, b);
    return g;
}

namespace {

std::vector<double> random_params(int count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> p(static_cast<size_t>(count));
    for (double& v : p) v = u(rng);
    return p;
}

} // namespace

netdyn::DynNetDocument random_document(std::mt19937_64& rng) {
    netdyn::DynNetDocument doc;
    std::uniform_int_distribution<int> nodes(0, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    const int n = nodes(rng);
    doc.topology = random_graph(n, 0.3, rng);

    if (u(rng) < 0.2) return doc; // topology-only document

    // Node dynamics, always three-dimensional so any coupling fits.
    const double pick_node = u(rng);
    if (pick_node < 0.4) {
        doc.node_dyn_name = "rossler3";
        doc.node_dyn_params = u(rng) < 0.5 ? std::vector<double>{}
                                           : random_params(3, rng);
    } else if (pick_node < 0.7) {
        doc.node_dyn_name = "null";
        doc.node_dyn_params = u(rng) < 0.5 ? std::vector<double>{}
                                           : std::vector<double>{3.0};
    } else {
        doc.node_dyn_name = "linear";
        doc.node_dyn_params = random_params(9, rng);
    }

    doc.edge_dyn_name = u(rng) < 0.5 ? "diffusive" : "diffusive_xz";
    if (u(rng) < 0.7) doc.edge_dyn_params = random_params(1, rng);

    for (int v = 0; v < n; ++v) {
        if (u(rng) >= 0.15) continue;
        netdyn::DynOverride ov;
        const double mode = u(rng);
        if (mode < 0.34) {
            ov.name = "null"; // registry defaults for the new name
        } else if (mode < 0.67) {
            ov.params = doc.node_dyn_name == "linear" ? random_params(9, rng)
                                                      : random_params(3, rng);
            if (doc.node_dyn_name == "null") ov.params = std::vector<double>{3.0};
        } else {
            ov.name = "rossler3";
            ov.params = random_params(3, rng);
        }
        doc.node_overrides[v] = ov;
    }
    for (const Edge& e : doc.topology.edges()) {
        if (u(rng) >= 0.1) continue;
        netdyn::DynOverride ov;
        const double mode = u(rng);
        if (mode < 0.34) {
            ov.name = "diffusive";
        } else if (mode < 0.67) {
            ov.params = random_params(1, rng);
        } else {
            ov.name = "diffusive_xz";
            ov.params = random_params(1, rng);
        }
        doc.edge_overrides[e] = ov;
    }
    return doc;
}

std::vector<double> rk4_final(const netdyn::OdeField& f, std::vector<double> x,
                              double t1, double h) {
    const size_t dim = x.size();
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    double t = 0.0;
    while (t < t1) {
        const double step = std::min(h, t1 - t);
        f(t, x, k1);
        for (size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
        f(t + 0.5 * step, tmp, k2);
        for (size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
        f(t + 0.5 * step, tmp, k3);
        for (size_t i = 0; i < dim; ++i) tmp[i] = x[i] + step * k3[i];
        f(t + step, tmp, k4);
        for (size_t i = 0; i < dim; ++i)
            x[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += step;
    }
    return x;
}

} // namespace support
