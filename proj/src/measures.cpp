#include "netdyn/measures.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "netdyn/errors.hpp"
#include "netdyn/spectrum.hpp"

namespace netdyn {

AnalysisRecord std_analysis(const Topology& g) {
    AnalysisRecord record;
    if (is_connected(g)) record.diameter = diameter(g);
    record.clustering = avg_clustering(g);
    record.girth = girth(g);
    return record;
}

double eigenratio(const Topology& g) {
    SpectrumResult spectrum = laplacian_spectrum(g);
    if (spectrum.lambda2() < 1e-9)
        return std::numeric_limits<double>::infinity();
    return spectrum.lambda_max() / spectrum.lambda2();
}

double sync_error(const Trajectory& traj, int node_count, double discard_fraction) {
    if (traj.times.empty())
        throw DomainError("sync_error of an empty trajectory");
    if (discard_fraction < 0.0 || discard_fraction >= 1.0)
        throw ConfigError("discard fraction must lie in [0, 1)");
    const int dim = traj.state_dim();
    if (node_count < 1 || dim % node_count != 0)
        throw ConfigError("state dimension " + std::to_string(dim) +
                          " is not a multiple of the node count " +
                          std::to_string(node_count));
    const int m = dim / node_count;

    const double t_begin = traj.times.front();
    const double span = traj.times.back() - t_begin;
    const double cutoff = t_begin + discard_fraction * span;

    double total = 0.0;
    long long used = 0;
    std::vector<double> mean(static_cast<size_t>(m));
    for (size_t s = 0; s < traj.times.size(); ++s) {
        if (traj.times[s] < cutoff) continue;
        const auto& state = traj.states[s];
        for (int k = 0; k < m; ++k) mean[static_cast<size_t>(k)] = 0.0;
        for (int i = 0; i < node_count; ++i)
            for (int k = 0; k < m; ++k)
                mean[static_cast<size_t>(k)] += state[static_cast<size_t>(i * m + k)];
        for (int k = 0; k < m; ++k) mean[static_cast<size_t>(k)] /= node_count;

        double sample_sum = 0.0;
        for (int i = 0; i < node_count; ++i) {
            double sq = 0.0;
            for (int k = 0; k < m; ++k) {
                double d = state[static_cast<size_t>(i * m + k)] - mean[static_cast<size_t>(k)];
                sq += d * d;
            }
            sample_sum += std::sqrt(sq);
        }
        total += sample_sum / node_count;
        ++used;
    }
    if (used == 0)
        throw DomainError("no trajectory samples left after the discard window");
    return total / static_cast<double>(used);
}

PerformanceMeasure make_measure(const std::string& name, double discard_fraction) {
    PerformanceMeasure measure;
    measure.name = name;
    if (name == "eigenratio") {
        measure.needs_dynamics = false;
        measure.evaluate = [](const Topology& g, const Trajectory*) {
            return eigenratio(g);
        };
    } else if (name == "sync_error") {
        if (discard_fraction < 0.0 || discard_fraction >= 1.0)
            throw ConfigError("discard fraction must lie in [0, 1)");
        measure.needs_dynamics = true;
        measure.evaluate = [discard_fraction](const Topology& g, const Trajectory* traj) {
            if (traj == nullptr)
                throw ConfigError("sync_error requires a simulated trajectory");
            return sync_error(*traj, g.node_count(), discard_fraction);
        };
    } else {
        std::string known;
        for (const auto& n : measure_names())
            known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown measure '" + name + "' (registered: " + known + ")");
    }
    return measure;
}

std::vector<std::string> measure_names() {
    return {"eigenratio", "sync_error"};
}

} // namespace netdyn
