#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "netdyn/topology.hpp"

namespace netdyn {

// Per-node vector field: out = f(state; params). Evaluation must be
// deterministic and side-effect free, with out.size() == dim.
struct NodeDynamics {
    std::string name;
    int dim = 0;
    std::vector<double> params;
    std::function<void(std::span<const double> state,
                       std::span<const double> params,
                       std::span<double> out)>
        field;

    void evaluate(std::span<const double> state, std::span<double> out) const {
        field(state, params, out);
    }
};

// Per-edge coupling contribution: out = g(x_j, x_i; params), added to
// node i's derivative. params[0] is the global coupling strength sigma
// for the built-in diffusive couplings, which satisfy g(x, x, p) = 0.
struct EdgeCoupling {
    std::string name;
    int dim = 0;
    std::vector<double> params;
    std::function<void(std::span<const double> neighbor_state,
                       std::span<const double> self_state,
                       std::span<const double> params,
                       std::span<double> out)>
        coupling;

    void evaluate(std::span<const double> neighbor_state,
                  std::span<const double> self_state,
                  std::span<double> out) const {
        coupling(neighbor_state, self_state, params, out);
    }
};

// Standalone evaluators for the built-in forms, usable without the
// registry machinery.
void rossler_field(std::span<const double> state, std::span<const double> abc,
                   std::span<double> out);
void diffusive_full(std::span<const double> x_j, std::span<const double> x_i,
                    double sigma, std::span<double> out);
void diffusive_xz(std::span<const double> x_j, std::span<const double> x_i,
                  double sigma, std::span<double> out);

// Registry lookup. Unknown names and invalid parameter shapes throw
// ConfigError at construction time, never during integration. Passing an
// empty params vector selects the entry's defaults.
//
//   rossler3   dim 3, params (a, b, c), default (0.2, 0.2, 5.7)
//   null       zero field, params (dim), default dim 3
//   linear     dx/dt = A x, params = row-major A, dim = sqrt(len)
NodeDynamics make_node_dynamics(const std::string& name,
                                std::vector<double> params = {});

//   diffusive     sigma * (x_j - x_i) on all components, params (sigma)
//   diffusive_xz  as above on components 1 and 3 only, requires dim 3
// Default sigma is 0.5. `dim` must match the node dynamics dimension.
EdgeCoupling make_edge_coupling(const std::string& name,
                                std::vector<double> params, int dim);

std::vector<std::string> node_dynamics_names();
std::vector<std::string> edge_coupling_names();

// A topology together with the dynamics living on it. A uniform default
// applies to every node and edge; individual overrides may replace it as
// long as the state dimension stays uniform.
class NetworkSystem {
public:
    NetworkSystem(Topology topology, NodeDynamics node_dyn, EdgeCoupling edge_dyn);

    const Topology& topology() const { return topology_; }
    Topology& topology() { return topology_; }

    int node_dim() const { return default_node_.dim; }
    int state_size() const { return topology_.node_count() * node_dim(); }

    const NodeDynamics& node_dynamics(int node) const;
    const EdgeCoupling& edge_coupling(const Edge& e) const;

    const NodeDynamics& default_node_dynamics() const { return default_node_; }
    const EdgeCoupling& default_edge_coupling() const { return default_edge_; }
    const std::map<int, NodeDynamics>& node_overrides() const { return node_overrides_; }
    const std::map<Edge, EdgeCoupling>& edge_overrides() const { return edge_overrides_; }

    void set_node_override(int node, NodeDynamics dyn);
    void set_edge_override(Edge e, EdgeCoupling coupling);

    // Stacked derivative: for node i,
    //   dX_i = f_i(X_i) + sum over neighbors j of g_ij(X_j, X_i),
    // neighbors summed in ascending id order so the result does not
    // depend on evaluation schedule. The field is autonomous; t is
    // accepted for signature generality.
    void derivative(double t, std::span<const double> state,
                    std::span<double> out) const;

private:
    Topology topology_;
    NodeDynamics default_node_;
    EdgeCoupling default_edge_;
    std::map<int, NodeDynamics> node_overrides_;
    std::map<Edge, EdgeCoupling> edge_overrides_;
};

// Right-hand side signature used by the integrator.
using OdeField = std::function<void(double t, std::span<const double> state,
                                    std::span<double> out)>;

// The stacked network field as a self-contained callable (owns a copy of
// the system, so it stays valid independently of the source object).
OdeField assemble_derivative(const NetworkSystem& sys);

} // namespace netdyn
