#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netdyn/graph_measures.hpp"
#include "netdyn/integrator.hpp"
#include "netdyn/topology.hpp"

namespace netdyn {

// Structural measures logged alongside the evolution. diameter is empty
// for disconnected graphs, girth is empty for acyclic ones.
struct AnalysisRecord {
    std::optional<int> diameter;
    double clustering = 0.0;
    std::optional<int> girth;
};

AnalysisRecord std_analysis(const Topology& g);

// lambda_N / lambda_2 of the graph Laplacian; +infinity when lambda_2
// vanishes (disconnected graph), which the supervisor never accepts.
double eigenratio(const Topology& g);

// Time-averaged mean node distance from the instantaneous node-mean
// state, over the samples after discarding the first discard_fraction of
// the time span. Zero exactly when every node coincides with the mean at
// every retained sample.
double sync_error(const Trajectory& traj, int node_count, double discard_fraction);

// Scalar objective evaluated each supervisor trial; lower is better and
// +infinity is allowed. Measures with needs_dynamics == false ignore the
// trajectory argument entirely.
struct PerformanceMeasure {
    std::string name;
    bool needs_dynamics = false;
    std::function<double(const Topology&, const Trajectory*)> evaluate;
};

// Registry lookup: "eigenratio" (topology only) or "sync_error"
// (dynamics based; discard_fraction applies to it). Unknown names throw
// ConfigError listing the registered measures.
PerformanceMeasure make_measure(const std::string& name, double discard_fraction = 0.5);

std::vector<std::string> measure_names();

} // namespace netdyn
