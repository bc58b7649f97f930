#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netdyn/dynamics.hpp"
#include "netdyn/supervisor.hpp"
#include "netdyn/topology.hpp"

namespace netdyn {

// Override attached to a single node or edge. An absent name keeps the
// document default; an absent params list keeps the default params when
// the name is unchanged and the registry defaults when it is not.
struct DynOverride {
    std::optional<std::string> name;
    std::optional<std::vector<double>> params;

    bool operator==(const DynOverride&) const = default;
};

// A topology plus the dynamical information carried by the network file
// format: graph-level defaults and per-node/per-edge overrides. Empty
// default names mean the file carries no dynamics (topology only);
// empty params select registry defaults.
struct DynNetDocument {
    Topology topology{0};
    std::string node_dyn_name;
    std::vector<double> node_dyn_params;
    std::string edge_dyn_name;
    std::vector<double> edge_dyn_params;
    std::map<int, DynOverride> node_overrides;
    std::map<Edge, DynOverride> edge_overrides;

    bool operator==(const DynNetDocument&) const = default;
};

// Check a document against the dynamics registries: every referenced
// name must resolve, every params list must fit its dynamics, override
// dimensions must agree with the default's, and override keys must
// point at real nodes/edges. Overrides additionally require the
// corresponding graph-level default, and edge dynamics require node
// dynamics (the state dimension comes from them). Violations throw
// FormatError.
void validate_document(const DynNetDocument& doc);

// Instantiate the runnable system a document describes. Requires both
// default dynamics names; throws ConfigError when they are missing or
// any entry fails registry validation.
NetworkSystem system_from_document(const DynNetDocument& doc);

// Minimal GML reader for plain topology input:
//   graph [ node [ id 0 ] ... edge [ source 0 target 1 ] ... ]
// Unknown keys are skipped, duplicate and reversed edges collapse to
// one undirected edge, node ids may be arbitrary non-negative integers
// (renumbered by ascending id). Parse and consistency problems throw
// FormatError carrying "path:line:".
Topology read_gml(const std::string& path);

// Topology-only GML writer matching the subset read_gml accepts.
void write_gml(const Topology& g, const std::string& path);

// Canonical network format: XML with declared keys ne_node_dyn,
// ne_node_params, ne_edge_dyn, ne_edge_params at graph scope plus
// node-/edge-scope variants for overrides, edgedefault="undirected",
// params space-separated with 17 significant digits. write then read
// is the identity on every DynNetDocument field. Data under undeclared
// or out-of-scope keys is ignored with a warning on standard error;
// structural problems throw FormatError.
void write_graphml(const DynNetDocument& doc, const std::string& path);
DynNetDocument read_graphml(const std::string& path);

// Evolution log as CSV:
//   iteration,temperature,Q_current,Q_best,accepted,diameter,clustering,girth
// accepted is 1/0; the three analysis columns are empty on rows whose
// record carries no analysis; an undefined diameter stays empty and an
// acyclic girth is written as "acyclic". Reals use 17 significant
// digits, '\n' line ends, no locale.
void write_log_csv(const std::vector<IterationRecord>& log, const std::string& path);

} // namespace netdyn
