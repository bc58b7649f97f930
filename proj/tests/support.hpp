#pragma once

// Reference implementations the tests check the library against.
// Everything here deliberately takes a different algorithmic route than
// the library (dense matrices + Jacobi rotations instead of Eigen,
// Floyd-Warshall instead of per-node BFS, and so on) so that a shared
// bug between the two sides is unlikely.

#include <optional>
#include <random>
#include <vector>

#include "netdyn/integrator.hpp"
#include "netdyn/netio.hpp"
#include "netdyn/topology.hpp"

namespace support {

using netdyn::Topology;

std::vector<std::vector<double>> laplacian_matrix(const Topology& g);

// Symmetric eigensolve by cyclic Jacobi sweeps, eigenvalues ascending.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a);

// lambda_max / lambda_2 with the same +inf cutoff the library applies.
double ref_eigenratio(const Topology& g);

bool ref_connected(const Topology& g);              // union-find
std::optional<int> ref_diameter(const Topology& g); // Floyd-Warshall
double ref_clustering(const Topology& g);           // adjacency matrix
std::optional<int> ref_girth(const Topology& g);    // BFS per start node

// Uniform random spanning tree shape (random attachment) plus up to
// `extra` distinct random chords.
Topology random_connected_graph(int n, int extra, std::mt19937_64& rng);

// Erdos-Renyi G(n, p); may be disconnected.
Topology random_graph(int n, double p, std::mt19937_64& rng);

// Random document exercising every serializable field: random topology,
// random registry dynamics, random node/edge overrides. Always valid
// (write_graphml then read_graphml must reproduce it exactly).
netdyn::DynNetDocument random_document(std::mt19937_64& rng);

// Classic fixed-step RK4; returns the final state only.
std::vector<double> rk4_final(const netdyn::OdeField& f, std::vector<double> x,
                              double t1, double h);

} // namespace support
