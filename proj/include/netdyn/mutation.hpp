#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "netdyn/topology.hpp"

namespace netdyn {

using Rng = std::mt19937_64;

// Reversible topology edit: remove `removed`, then add `added`. Always
// conserves the edge count; applying and reverting restores the original
// edge set exactly.
struct MutationProposal {
    std::vector<Edge> removed;
    std::vector<Edge> added;

    bool empty() const { return removed.empty() && added.empty(); }
};

// Degree-preserving rewiring: `count` double-edge swaps, each picking
// distinct edges (a,b),(c,d) with four distinct endpoints and replacing
// them by (a,c),(b,d) or (a,d),(b,c) with equal probability. Candidates
// that would duplicate an existing edge are re-drawn, up to max_retries
// per swap; exhausting the budget (e.g. on a complete graph, which has
// no valid swap) yields nullopt, which the supervisor counts as a
// rejected trial. Connectivity is not enforced here.
std::optional<MutationProposal> propose_rewire(const Topology& g, int count,
                                               Rng& rng, int max_retries = 100);

// Non-degree-preserving variant: moves one endpoint of a random edge to
// a uniformly chosen non-adjacent node. Same retry/nullopt contract.
std::optional<MutationProposal> propose_rewire_single(const Topology& g, int count,
                                                      Rng& rng, int max_retries = 100);

// Throw IntegrityError when the proposal does not match the edge set it
// is applied to.
void apply_proposal(Topology& g, const MutationProposal& p);
void revert_proposal(Topology& g, const MutationProposal& p);

using MutationFn =
    std::function<std::optional<MutationProposal>(const Topology&, int, Rng&)>;

// Operator registry: "rewire" (double-edge swap) or "rewire_single".
MutationFn make_mutation(const std::string& name);

std::vector<std::string> mutation_names();

} // namespace netdyn
