#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "netdyn/dynamics.hpp"
#include "netdyn/errors.hpp"
#include "netdyn/topology.hpp"

using namespace netdyn;

namespace {

std::vector<double> eval_node(const NodeDynamics& dyn, std::vector<double> state) {
    std::vector<double> out(state.size());
    dyn.evaluate(state, out);
    return out;
}

std::vector<double> eval_edge(const EdgeCoupling& c, std::vector<double> xj,
                              std::vector<double> xi) {
    std::vector<double> out(xj.size());
    c.evaluate(xj, xi, out);
    return out;
}

} // namespace

TEST_CASE("rossler field at a reference point") {
    const std::vector<double> abc{0.2, 0.2, 5.7};
    std::vector<double> out(3);
    rossler_field(std::vector<double>{1.0, 1.0, 1.0}, abc, out);
    CHECK(out[0] == -2.0);
    CHECK(out[1] == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(out[2] == doctest::Approx(-4.5).epsilon(1e-15));

    // Generic point against the closed form.
    const double x = 2.0, y = -1.0, z = 0.5;
    const double a = 0.1, b = 0.3, c = 7.0;
    rossler_field(std::vector<double>{x, y, z}, std::vector<double>{a, b, c}, out);
    CHECK(out[0] == doctest::Approx(-y - z));
    CHECK(out[1] == doctest::Approx(x + a * y));
    CHECK(out[2] == doctest::Approx(b + z * (x - c)));
}

TEST_CASE("node dynamics registry") {
    const NodeDynamics ross = make_node_dynamics("rossler3");
    CHECK(ross.name == "rossler3");
    CHECK(ross.dim == 3);
    CHECK(ross.params == std::vector<double>{0.2, 0.2, 5.7});
    CHECK(eval_node(ross, {1.0, 1.0, 1.0})[0] == -2.0);

    CHECK_THROWS_AS(make_node_dynamics("rossler3", {1.0, 2.0}), ConfigError);

    const NodeDynamics null3 = make_node_dynamics("null");
    CHECK(null3.dim == 3);
    CHECK(eval_node(null3, {4.0, -1.0, 2.0}) == std::vector<double>{0.0, 0.0, 0.0});

    const NodeDynamics null5 = make_node_dynamics("null", {5.0});
    CHECK(null5.dim == 5);
    CHECK_THROWS_AS(make_node_dynamics("null", {2.5}), ConfigError);
    CHECK_THROWS_AS(make_node_dynamics("null", {0.0}), ConfigError);
    CHECK_THROWS_AS(make_node_dynamics("null", {2.0, 3.0}), ConfigError);

    // linear: row-major matrix, dimension from the element count.
    const NodeDynamics rot = make_node_dynamics("linear", {0.0, 1.0, -1.0, 0.0});
    CHECK(rot.dim == 2);
    CHECK(eval_node(rot, {3.0, 4.0}) == std::vector<double>{4.0, -3.0});
    CHECK_THROWS_AS(make_node_dynamics("linear", {1.0, 2.0, 3.0}), ConfigError);
    CHECK_THROWS_AS(make_node_dynamics("linear", {}), ConfigError);

    CHECK_THROWS_AS(make_node_dynamics("nosuch"), ConfigError);
    try {
        make_node_dynamics("nosuch");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("rossler3") != std::string::npos);
        CHECK(msg.find("null") != std::string::npos);
        CHECK(msg.find("linear") != std::string::npos);
    }

    const auto names = node_dynamics_names();
    CHECK(std::count(names.begin(), names.end(), "rossler3") == 1);
    CHECK(std::count(names.begin(), names.end(), "null") == 1);
    CHECK(std::count(names.begin(), names.end(), "linear") == 1);
}

TEST_CASE("edge coupling registry") {
    const EdgeCoupling d = make_edge_coupling("diffusive", {}, 3);
    CHECK(d.params == std::vector<double>{0.5}); // default sigma
    CHECK(d.dim == 3);
    CHECK(eval_edge(d, {1.0, 2.0, 3.0}, {0.5, 0.0, -1.0}) ==
          std::vector<double>{0.25, 1.0, 2.0});

    const EdgeCoupling d1 = make_edge_coupling("diffusive", {2.0}, 1);
    CHECK(eval_edge(d1, {3.0}, {1.0}) == std::vector<double>{4.0});

    const EdgeCoupling xz = make_edge_coupling("diffusive_xz", {2.0}, 3);
    CHECK(eval_edge(xz, {1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}) ==
          std::vector<double>{2.0, 0.0, 6.0});

    CHECK_THROWS_AS(make_edge_coupling("diffusive_xz", {0.5}, 2), ConfigError);
    CHECK_THROWS_AS(make_edge_coupling("diffusive", {0.5, 1.0}, 3), ConfigError);
    CHECK_THROWS_AS(make_edge_coupling("diffusive", {0.5}, 0), ConfigError);
    CHECK_THROWS_AS(make_edge_coupling("nosuch", {0.5}, 3), ConfigError);

    const auto names = edge_coupling_names();
    CHECK(std::count(names.begin(), names.end(), "diffusive") == 1);
    CHECK(std::count(names.begin(), names.end(), "diffusive_xz") == 1);
}

TEST_CASE("diffusive couplings vanish on the synchronized manifold") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (const char* name : {"diffusive", "diffusive_xz"}) {
        const EdgeCoupling c = make_edge_coupling(name, {1.7}, 3);
        for (int i = 0; i < 20; ++i) {
            const std::vector<double> x{u(rng), u(rng), u(rng)};
            const std::vector<double> out = eval_edge(c, x, x);
            CHECK(out == std::vector<double>{0.0, 0.0, 0.0});
        }
    }
}

TEST_CASE("two-node diffusive exchange") {
    Topology g(2);
    g.add_edge(0, 1);
    NetworkSystem sys(g, make_node_dynamics("null"),
                      make_edge_coupling("diffusive", {0.5}, 3));
    CHECK(sys.state_size() == 6);

    const std::vector<double> state{0.0, 0.0, 0.0, 1.0, 1.0, 1.0};
    std::vector<double> out(6);
    sys.derivative(0.0, state, out);
    CHECK(out == std::vector<double>{0.5, 0.5, 0.5, -0.5, -0.5, -0.5});
}

TEST_CASE("network derivative matches the manual assembly") {
    const Topology g = ring_lattice(5, 2);
    const double sigma = 0.7;
    NetworkSystem sys(g, make_node_dynamics("rossler3"),
                      make_edge_coupling("diffusive", {sigma}, 3));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> state(15);
    for (double& v : state) v = u(rng);

    std::vector<double> out(15);
    sys.derivative(0.0, state, out);

    const std::vector<double> abc{0.2, 0.2, 5.7};
    for (int i = 0; i < 5; ++i) {
        std::vector<double> self(3);
        rossler_field(std::span<const double>(state).subspan(3 * i, 3), abc, self);
        for (int k = 0; k < 3; ++k) {
            double coupling = 0.0;
            for (int j : g.neighbors(i))
                coupling += sigma * (state[static_cast<size_t>(3 * j + k)] -
                                     state[static_cast<size_t>(3 * i + k)]);
            CHECK(out[static_cast<size_t>(3 * i + k)] ==
                  doctest::Approx(self[static_cast<size_t>(k)] + coupling)
                      .epsilon(1e-14));
        }
    }
}

TEST_CASE("xz coupling leaves the y component to the node field") {
    Topology g(2);
    g.add_edge(0, 1);
    NetworkSystem sys(g, make_node_dynamics("null"),
                      make_edge_coupling("diffusive_xz", {0.5}, 3));
    const std::vector<double> state{0.0, 0.0, 0.0, 2.0, 2.0, 2.0};
    std::vector<double> out(6);
    sys.derivative(0.0, state, out);
    CHECK(out == std::vector<double>{1.0, 0.0, 1.0, -1.0, 0.0, -1.0});
}

TEST_CASE("network system validates dimensions") {
    Topology g(2);
    g.add_edge(0, 1);
    CHECK_THROWS_AS(NetworkSystem(g, make_node_dynamics("null", {2.0}),
                                  make_edge_coupling("diffusive", {0.5}, 3)),
                    ConfigError);

    NetworkSystem sys(g, make_node_dynamics("rossler3"),
                      make_edge_coupling("diffusive", {0.5}, 3));
    CHECK_THROWS_AS(sys.set_node_override(0, make_node_dynamics("null", {2.0})),
                    ConfigError);
    CHECK_THROWS_AS(sys.set_node_override(5, make_node_dynamics("null")),
                    ConfigError);
    CHECK_THROWS_AS(sys.set_edge_override(make_edge(0, 1),
                                          make_edge_coupling("diffusive", {1.0}, 2)),
                    ConfigError);
    std::vector<double> short_state(5, 0.0);
    std::vector<double> short_out(5, 0.0);
    CHECK_THROWS_AS(sys.derivative(0.0, short_state, short_out),
                    ConfigError); // wrong state size
}

TEST_CASE("per-node and per-edge overrides take effect") {
    const Topology g = complete_graph(3);
    NetworkSystem sys(g, make_node_dynamics("rossler3"),
                      make_edge_coupling("diffusive", {0.5}, 3));

    sys.set_node_override(1, make_node_dynamics("null"));
    sys.set_edge_override(make_edge(0, 2), make_edge_coupling("diffusive", {0.0}, 3));

    CHECK(sys.node_dynamics(0).name == "rossler3");
    CHECK(sys.node_dynamics(1).name == "null");
    CHECK(sys.edge_coupling(make_edge(0, 1)).params == std::vector<double>{0.5});
    CHECK(sys.edge_coupling(make_edge(0, 2)).params == std::vector<double>{0.0});

    std::vector<double> state(9, 0.0);
    for (int k = 0; k < 3; ++k) state[static_cast<size_t>(3 + k)] = 2.0; // node 1
    std::vector<double> out(9);
    sys.derivative(0.0, state, out);

    // Node 1 runs the null field, so its derivative is pure coupling:
    // both incident edges pull it toward the others at sigma = 0.5.
    for (int k = 0; k < 3; ++k)
        CHECK(out[static_cast<size_t>(3 + k)] == doctest::Approx(-2.0));

    // Edge (0,2) is switched off; node 0 sees only node 1.
    std::vector<double> base(3);
    rossler_field(std::span<const double>(state).subspan(0, 3),
                  std::vector<double>{0.2, 0.2, 5.7}, base);
    for (int k = 0; k < 3; ++k)
        CHECK(out[static_cast<size_t>(k)] ==
              doctest::Approx(base[static_cast<size_t>(k)] + 0.5 * 2.0));
}

TEST_CASE("assembled field owns an independent copy of the system") {
    Topology g(2);
    g.add_edge(0, 1);
    NetworkSystem sys(g, make_node_dynamics("null"),
                      make_edge_coupling("diffusive", {0.5}, 3));
    const OdeField field = assemble_derivative(sys);

    const std::vector<double> state{0.0, 0.0, 0.0, 1.0, 1.0, 1.0};
    std::vector<double> before(6), after(6);
    field(0.0, state, before);

    sys.topology().remove_edge(0, 1); // must not affect the assembled field
    field(0.0, state, after);
    CHECK(before == after);
    CHECK(before[0] == 0.5);
}
