#include "netdyn/mutation.hpp"

#include <algorithm>
#include <string>

#include "netdyn/errors.hpp"

namespace netdyn {

namespace {

// Net bookkeeping across the swaps of one proposal: re-adding an edge
// removed earlier (or vice versa) cancels instead of listing both, so
// the proposal describes the net edit only.
struct ProposalBuilder {
    std::vector<Edge> removed;
    std::vector<Edge> added;

    void record_remove(const Edge& e) {
        auto it = std::find(added.begin(), added.end(), e);
        if (it != added.end())
            added.erase(it);
        else
            removed.push_back(e);
    }
    void record_add(const Edge& e) {
        auto it = std::find(removed.begin(), removed.end(), e);
        if (it != removed.end())
            removed.erase(it);
        else
            added.push_back(e);
    }
};

} // namespace

std::optional<MutationProposal> propose_rewire(const Topology& g, int count,
                                               Rng& rng, int max_retries) {
    if (count < 1) throw ConfigError("rewire count must be at least 1");
    if (g.edge_count() < 2) throw ConfigError("rewiring requires at least 2 edges");

    Topology work = g;
    ProposalBuilder builder;
    for (int swap = 0; swap < count; ++swap) {
        std::uniform_int_distribution<size_t> pick_edge(0, work.edges().size() - 1);
        std::uniform_int_distribution<int> pick_orientation(0, 1);
        bool done = false;
        for (int attempt = 0; attempt < max_retries && !done; ++attempt) {
            size_t ei = pick_edge(rng);
            size_t ej = pick_edge(rng);
            if (ei == ej) continue;
            auto [a, b] = work.edges()[ei];
            auto [c, d] = work.edges()[ej];
            if (a == c || a == d || b == c || b == d) continue;
            if (pick_orientation(rng) == 1) std::swap(c, d);
            Edge first = make_edge(a, c);
            Edge second = make_edge(b, d);
            if (work.has_edge(first.first, first.second) ||
                work.has_edge(second.first, second.second))
                continue;
            Edge old_first = make_edge(a, b);
            Edge old_second = make_edge(c, d);
            work.remove_edge(old_first.first, old_first.second);
            work.remove_edge(old_second.first, old_second.second);
            work.add_edge(first.first, first.second);
            work.add_edge(second.first, second.second);
            builder.record_remove(old_first);
            builder.record_remove(old_second);
            builder.record_add(first);
            builder.record_add(second);
            done = true;
        }
        if (!done) return std::nullopt;
    }
    return MutationProposal{std::move(builder.removed), std::move(builder.added)};
}

std::optional<MutationProposal> propose_rewire_single(const Topology& g, int count,
                                                      Rng& rng, int max_retries) {
    if (count < 1) throw ConfigError("rewire count must be at least 1");
    if (g.edge_count() < 1) throw ConfigError("rewiring requires at least 1 edge");

    Topology work = g;
    ProposalBuilder builder;
    for (int move = 0; move < count; ++move) {
        std::uniform_int_distribution<size_t> pick_edge(0, work.edges().size() - 1);
        std::uniform_int_distribution<int> pick_end(0, 1);
        std::uniform_int_distribution<int> pick_node(0, work.node_count() - 1);
        bool done = false;
        for (int attempt = 0; attempt < max_retries && !done; ++attempt) {
            auto [u, v] = work.edges()[pick_edge(rng)];
            if (pick_end(rng) == 1) std::swap(u, v);
            int w = pick_node(rng);
            if (w == u || w == v || work.has_edge(u, w)) continue;
            work.remove_edge(u, v);
            work.add_edge(u, w);
            builder.record_remove(make_edge(u, v));
            builder.record_add(make_edge(u, w));
            done = true;
        }
        if (!done) return std::nullopt;
    }
    return MutationProposal{std::move(builder.removed), std::move(builder.added)};
}

void apply_proposal(Topology& g, const MutationProposal& p) {
    size_t removed_done = 0, added_done = 0;
    try {
        for (const Edge& e : p.removed) {
            if (!g.has_edge(e.first, e.second))
                throw IntegrityError("proposal removes absent edge (" +
                                     std::to_string(e.first) + "," +
                                     std::to_string(e.second) + ")");
            g.remove_edge(e.first, e.second);
            ++removed_done;
        }
        for (const Edge& e : p.added) {
            if (e.first == e.second || g.has_edge(e.first, e.second))
                throw IntegrityError("proposal adds invalid or existing edge (" +
                                     std::to_string(e.first) + "," +
                                     std::to_string(e.second) + ")");
            g.add_edge(e.first, e.second);
            ++added_done;
        }
    } catch (const ConfigError& err) {
        // Out-of-range endpoints surface from Topology as ConfigError;
        // a proposal that trips them is inconsistent with this graph.
        while (added_done > 0) {
            const Edge& e = p.added[--added_done];
            g.remove_edge(e.first, e.second);
        }
        while (removed_done > 0) {
            const Edge& e = p.removed[--removed_done];
            g.add_edge(e.first, e.second);
        }
        throw IntegrityError(err.what());
    } catch (const IntegrityError&) {
        while (added_done > 0) {
            const Edge& e = p.added[--added_done];
            g.remove_edge(e.first, e.second);
        }
        while (removed_done > 0) {
            const Edge& e = p.removed[--removed_done];
            g.add_edge(e.first, e.second);
        }
        throw;
    }
}

void revert_proposal(Topology& g, const MutationProposal& p) {
    apply_proposal(g, MutationProposal{p.added, p.removed});
}

MutationFn make_mutation(const std::string& name) {
    if (name == "rewire")
        return [](const Topology& g, int count, Rng& rng) {
            return propose_rewire(g, count, rng);
        };
    if (name == "rewire_single")
        return [](const Topology& g, int count, Rng& rng) {
            return propose_rewire_single(g, count, rng);
        };
    std::string known;
    for (const auto& n : mutation_names())
        known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown mutation operator '" + name + "' (registered: " +
                      known + ")");
}

std::vector<std::string> mutation_names() {
    return {"rewire", "rewire_single"};
}

} // namespace netdyn
