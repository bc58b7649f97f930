#pragma once

#include <vector>

#include "netdyn/topology.hpp"

namespace netdyn {

// Eigenvalues of the graph Laplacian L = D - A, sorted ascending.
// lambda_1 is 0 (up to round-off) and the multiplicity of eigenvalue 0
// equals the number of connected components.
struct SpectrumResult {
    std::vector<double> eigenvalues;

    double lambda2() const { return eigenvalues.at(1); }
    double lambda_max() const { return eigenvalues.back(); }
};

// Dense symmetric full-spectrum solve; requires at least 2 nodes.
SpectrumResult laplacian_spectrum(const Topology& g);

} // namespace netdyn
