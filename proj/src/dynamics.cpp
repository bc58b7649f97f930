#include "netdyn/dynamics.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "netdyn/errors.hpp"

namespace netdyn {

void rossler_field(std::span<const double> state, std::span<const double> abc,
                   std::span<double> out) {
    const double x = state[0], y = state[1], z = state[2];
    const double a = abc[0], b = abc[1], c = abc[2];
    out[0] = -y - z;
    out[1] = x + a * y;
    out[2] = b + z * (x - c);
}

void diffusive_full(std::span<const double> x_j, std::span<const double> x_i,
                    double sigma, std::span<double> out) {
    for (size_t k = 0; k < out.size(); ++k)
        out[k] = sigma * (x_j[k] - x_i[k]);
}

void diffusive_xz(std::span<const double> x_j, std::span<const double> x_i,
                  double sigma, std::span<double> out) {
    out[0] = sigma * (x_j[0] - x_i[0]);
    out[1] = 0.0;
    out[2] = sigma * (x_j[2] - x_i[2]);
}

NodeDynamics make_node_dynamics(const std::string& name,
                                std::vector<double> params) {
    NodeDynamics dyn;
    dyn.name = name;
    if (name == "rossler3") {
        if (params.empty()) params = {0.2, 0.2, 5.7};
        if (params.size() != 3)
            throw ConfigError("rossler3 expects params (a, b, c), got " +
                              std::to_string(params.size()) + " values");
        dyn.dim = 3;
        dyn.params = std::move(params);
        dyn.field = [](std::span<const double> state, std::span<const double> p,
                       std::span<double> out) { rossler_field(state, p, out); };
    } else if (name == "null") {
        int dim = 3;
        if (!params.empty()) {
            if (params.size() != 1 || params[0] != std::floor(params[0]) || params[0] < 1)
                throw ConfigError("null dynamics expects a single positive integer "
                                  "dimension parameter");
            dim = static_cast<int>(params[0]);
        }
        dyn.dim = dim;
        dyn.params = std::move(params);
        dyn.field = [](std::span<const double>, std::span<const double>,
                       std::span<double> out) {
            for (double& v : out) v = 0.0;
        };
    } else if (name == "linear") {
        int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(params.size()))));
        if (dim < 1 || static_cast<size_t>(dim) * static_cast<size_t>(dim) != params.size())
            throw ConfigError("linear dynamics expects a row-major square matrix; "
                              "got " + std::to_string(params.size()) + " values");
        dyn.dim = dim;
        dyn.params = std::move(params);
        dyn.field = [dim](std::span<const double> state, std::span<const double> a,
                          std::span<double> out) {
            for (int r = 0; r < dim; ++r) {
                double acc = 0.0;
                for (int c = 0; c < dim; ++c)
                    acc += a[static_cast<size_t>(r * dim + c)] * state[static_cast<size_t>(c)];
                out[static_cast<size_t>(r)] = acc;
            }
        };
    } else {
        std::string known;
        for (const auto& n : node_dynamics_names())
            known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown node dynamics '" + name + "' (registered: " +
                          known + ")");
    }
    return dyn;
}

EdgeCoupling make_edge_coupling(const std::string& name,
                                std::vector<double> params, int dim) {
    if (dim < 1)
        throw ConfigError("edge coupling dimension must be positive");
    EdgeCoupling coupling;
    coupling.name = name;
    coupling.dim = dim;
    if (params.empty()) params = {0.5};
    if (name == "diffusive") {
        if (params.size() != 1)
            throw ConfigError("diffusive coupling expects params (sigma)");
        coupling.params = std::move(params);
        coupling.coupling = [](std::span<const double> x_j, std::span<const double> x_i,
                               std::span<const double> p, std::span<double> out) {
            diffusive_full(x_j, x_i, p[0], out);
        };
    } else if (name == "diffusive_xz") {
        if (dim != 3)
            throw ConfigError("diffusive_xz couples 3-dimensional states, got dim " +
                              std::to_string(dim));
        if (params.size() != 1)
            throw ConfigError("diffusive_xz coupling expects params (sigma)");
        coupling.params = std::move(params);
        coupling.coupling = [](std::span<const double> x_j, std::span<const double> x_i,
                               std::span<const double> p, std::span<double> out) {
            diffusive_xz(x_j, x_i, p[0], out);
        };
    } else {
        std::string known;
        for (const auto& n : edge_coupling_names())
            known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown edge coupling '" + name + "' (registered: " +
                          known + ")");
    }
    return coupling;
}

std::vector<std::string> node_dynamics_names() {
    return {"rossler3", "null", "linear"};
}

std::vector<std::string> edge_coupling_names() {
    return {"diffusive", "diffusive_xz"};
}

NetworkSystem::NetworkSystem(Topology topology, NodeDynamics node_dyn,
                             EdgeCoupling edge_dyn)
    : topology_(std::move(topology)),
      default_node_(std::move(node_dyn)),
      default_edge_(std::move(edge_dyn)) {
    if (default_node_.dim != default_edge_.dim)
        throw ConfigError("node dynamics dimension " + std::to_string(default_node_.dim) +
                          " does not match edge coupling dimension " +
                          std::to_string(default_edge_.dim));
}

const NodeDynamics& NetworkSystem::node_dynamics(int node) const {
    auto it = node_overrides_.find(node);
    return it != node_overrides_.end() ? it->second : default_node_;
}

const EdgeCoupling& NetworkSystem::edge_coupling(const Edge& e) const {
    auto it = edge_overrides_.find(e);
    return it != edge_overrides_.end() ? it->second : default_edge_;
}

void NetworkSystem::set_node_override(int node, NodeDynamics dyn) {
    if (node < 0 || node >= topology_.node_count())
        throw ConfigError("node override id " + std::to_string(node) + " out of range");
    if (dyn.dim != node_dim())
        throw ConfigError("node override dimension " + std::to_string(dyn.dim) +
                          " does not match system dimension " + std::to_string(node_dim()));
    node_overrides_[node] = std::move(dyn);
}

void NetworkSystem::set_edge_override(Edge e, EdgeCoupling coupling) {
    if (!topology_.has_edge(e.first, e.second))
        throw ConfigError("edge override (" + std::to_string(e.first) + "," +
                          std::to_string(e.second) + ") is not an edge");
    if (coupling.dim != node_dim())
        throw ConfigError("edge override dimension " + std::to_string(coupling.dim) +
                          " does not match system dimension " + std::to_string(node_dim()));
    edge_overrides_[make_edge(e.first, e.second)] = std::move(coupling);
}

void NetworkSystem::derivative(double /*t*/, std::span<const double> state,
                               std::span<double> out) const {
    const int n = topology_.node_count();
    const int m = node_dim();
    if (static_cast<int>(state.size()) != n * m || out.size() != state.size())
        throw ConfigError("derivative buffers must hold " + std::to_string(n * m) +
                          " components, got " + std::to_string(state.size()) +
                          " in / " + std::to_string(out.size()) + " out");
    std::vector<double> contrib(static_cast<size_t>(m));
    for (int i = 0; i < n; ++i) {
        auto x_i = state.subspan(static_cast<size_t>(i) * m, static_cast<size_t>(m));
        auto out_i = out.subspan(static_cast<size_t>(i) * m, static_cast<size_t>(m));
        node_dynamics(i).evaluate(x_i, out_i);
        for (int j : topology_.neighbors(i)) {
            auto x_j = state.subspan(static_cast<size_t>(j) * m, static_cast<size_t>(m));
            edge_coupling(make_edge(i, j)).evaluate(x_j, x_i, contrib);
            for (int k = 0; k < m; ++k) out_i[static_cast<size_t>(k)] += contrib[static_cast<size_t>(k)];
        }
    }
}

OdeField assemble_derivative(const NetworkSystem& sys) {
    auto owned = std::make_shared<NetworkSystem>(sys);
    return [owned](double t, std::span<const double> state, std::span<double> out) {
        owned->derivative(t, state, out);
    };
}

} // namespace netdyn
