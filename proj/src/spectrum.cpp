#include "netdyn/spectrum.hpp"

#include <Eigen/Dense>

#include "netdyn/errors.hpp"

namespace netdyn {

SpectrumResult laplacian_spectrum(const Topology& g) {
    const int n = g.node_count();
    if (n < 2)
        throw ConfigError("Laplacian spectrum requires at least 2 nodes");

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        lap(e.first, e.second) -= 1.0;
        lap(e.second, e.first) -= 1.0;
        lap(e.first, e.first) += 1.0;
        lap(e.second, e.second) += 1.0;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    SpectrumResult result;
    result.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + n);
    // Eigen returns ascending order already; keep the guarantee explicit.
    std::sort(result.eigenvalues.begin(), result.eigenvalues.end());
    return result;
}

} // namespace netdyn
