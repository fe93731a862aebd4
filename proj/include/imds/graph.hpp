#pragma once

// Generic explicit-state graphs: BFS construction with deterministic
// numbering, and the reachability algorithms the analyses are built from.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "imds/error.hpp"

namespace imds {

struct Limits {
    std::size_t max_nodes = 1'000'000;
    std::size_t max_edges = 5'000'000;

    /// Defaults overridden by IMDS_MAX_NODES / IMDS_MAX_EDGES when set.
    static Limits from_env() {
        Limits l;
        if (const char* n = std::getenv("IMDS_MAX_NODES")) l.max_nodes = std::stoull(n);
        if (const char* e = std::getenv("IMDS_MAX_EDGES")) l.max_edges = std::stoull(e);
        return l;
    }
};

struct Edge {
    std::size_t source = 0;
    std::size_t label = 0;
    std::size_t target = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Node 0 is the initial state. Edges are grouped by source in ascending
/// source order, so `offsets[n]..offsets[n+1]` are the out-edges of n.
template <class State>
struct StateGraph {
    std::vector<State> nodes;
    std::vector<Edge> edges;
    std::vector<std::size_t> offsets{0};

    std::size_t node_count() const noexcept { return nodes.size(); }
    std::size_t edge_count() const noexcept { return edges.size(); }
    std::span<const Edge> out(std::size_t n) const {
        return std::span<const Edge>(edges).subspan(offsets[n], offsets[n + 1] - offsets[n]);
    }
    std::size_t out_degree(std::size_t n) const { return offsets[n + 1] - offsets[n]; }
};

/// Breadth-first exploration. `expand(state, emit)` must call
/// `emit(label, successor)` for every enabled step, in a fixed order; the
/// resulting numbering is the BFS discovery order.
template <class State, class Hash = std::hash<State>, class Expand>
StateGraph<State> explore(State initial, Expand&& expand, const Limits& limits, const char* what = "state space") {
    StateGraph<State> g;
    std::unordered_map<State, std::size_t, Hash> index;
    index.emplace(initial, 0);
    g.nodes.push_back(std::move(initial));

    for (std::size_t cur = 0; cur < g.nodes.size(); ++cur) {
        // Copy: emplacing into g.nodes may reallocate.
        const State source = g.nodes[cur];
        expand(source, [&](std::size_t label, State next) {
            auto [it, inserted] = index.try_emplace(std::move(next), g.nodes.size());
            if (inserted) {
                if (g.nodes.size() >= limits.max_nodes)
                    throw LimitExceeded(std::string(what) + ": node limit exceeded", g.nodes.size() + 1, g.edges.size());
                g.nodes.push_back(it->first);
            }
            if (g.edges.size() >= limits.max_edges)
                throw LimitExceeded(std::string(what) + ": edge limit exceeded", g.nodes.size(), g.edges.size() + 1);
            g.edges.push_back({cur, label, it->second});
        });
        g.offsets.push_back(g.edges.size());
    }
    return g;
}

/// A path from node 0: `nodes.size() == labels.size() + 1`.
struct Trace {
    std::vector<std::size_t> nodes;
    std::vector<std::size_t> labels;

    std::size_t length() const noexcept { return labels.size(); }
    friend bool operator==(const Trace&, const Trace&) = default;
};

/// BFS-shortest path from node 0 to the lowest-numbered node in `goal`.
/// Because nodes are numbered in BFS order, the first goal node found has
/// minimal distance.
template <class State>
std::optional<Trace> shortest_path_to(const StateGraph<State>& g, const std::vector<bool>& goal) {
    if (g.nodes.empty()) return std::nullopt;
    std::vector<std::size_t> parent_edge(g.node_count(), SIZE_MAX);
    std::vector<bool> seen(g.node_count(), false);
    std::vector<std::size_t> queue{0};
    seen[0] = true;
    std::optional<std::size_t> hit;
    for (std::size_t qi = 0; qi < queue.size() && !hit; ++qi) {
        const std::size_t n = queue[qi];
        if (goal[n]) {
            hit = n;
            break;
        }
        for (std::size_t e = g.offsets[n]; e < g.offsets[n + 1]; ++e) {
            const std::size_t t = g.edges[e].target;
            if (!seen[t]) {
                seen[t] = true;
                parent_edge[t] = e;
                queue.push_back(t);
            }
        }
    }
    if (!hit) return std::nullopt;
    Trace tr;
    for (std::size_t n = *hit; n != 0; n = g.edges[parent_edge[n]].source) {
        tr.nodes.push_back(n);
        tr.labels.push_back(g.edges[parent_edge[n]].label);
    }
    tr.nodes.push_back(0);
    std::reverse(tr.nodes.begin(), tr.nodes.end());
    std::reverse(tr.labels.begin(), tr.labels.end());
    return tr;
}

/// BFS distance from node 0; SIZE_MAX for unreachable nodes.
template <class State>
std::vector<std::size_t> distances(const StateGraph<State>& g) {
    std::vector<std::size_t> dist(g.node_count(), SIZE_MAX);
    if (g.nodes.empty()) return dist;
    std::vector<std::size_t> queue{0};
    dist[0] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const std::size_t n = queue[qi];
        for (const Edge& e : g.out(n)) {
            if (dist[e.target] == SIZE_MAX) {
                dist[e.target] = dist[n] + 1;
                queue.push_back(e.target);
            }
        }
    }
    return dist;
}

template <class State, class Pred>
std::optional<Trace> shortest_path(const StateGraph<State>& g, Pred&& pred) {
    std::vector<bool> goal(g.node_count());
    for (std::size_t n = 0; n < g.node_count(); ++n) goal[n] = pred(g.nodes[n]);
    return shortest_path_to(g, goal);
}

/// Nodes from which some node in `targets` is reachable (targets included).
template <class State>
std::vector<bool> backward_reachable(const StateGraph<State>& g, const std::vector<bool>& targets) {
    std::vector<std::vector<std::size_t>> preds(g.node_count());
    for (const Edge& e : g.edges) preds[e.target].push_back(e.source);
    std::vector<bool> mark = targets;
    std::vector<std::size_t> stack;
    for (std::size_t n = 0; n < g.node_count(); ++n)
        if (mark[n]) stack.push_back(n);
    while (!stack.empty()) {
        const std::size_t n = stack.back();
        stack.pop_back();
        for (std::size_t p : preds[n]) {
            if (!mark[p]) {
                mark[p] = true;
                stack.push_back(p);
            }
        }
    }
    return mark;
}

/// Strongly connected component id per node (iterative Tarjan).
template <class State>
std::vector<std::size_t> strongly_connected_components(const StateGraph<State>& g, std::size_t* count = nullptr) {
    const std::size_t n = g.node_count();
    constexpr std::size_t unset = SIZE_MAX;
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0, next_comp = 0;

    struct Frame {
        std::size_t node;
        std::size_t edge;
    };
    std::vector<Frame> call;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        call.push_back({root, g.offsets[root]});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < g.offsets[f.node + 1]) {
                const std::size_t t = g.edges[f.edge++].target;
                if (index[t] == unset) {
                    index[t] = low[t] = next_index++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    call.push_back({t, g.offsets[t]});
                } else if (on_stack[t]) {
                    low[f.node] = std::min(low[f.node], index[t]);
                }
                continue;
            }
            const std::size_t v = f.node;
            call.pop_back();
            if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                } while (w != v);
                ++next_comp;
            }
        }
    }
    if (count) *count = next_comp;
    return comp;
}

/// True iff the subgraph induced by `keep` has no cycle (self-loops count).
template <class State>
bool induced_acyclic(const StateGraph<State>& g, const std::vector<bool>& keep) {
    std::vector<std::size_t> indeg(g.node_count(), 0);
    std::size_t kept = 0;
    for (std::size_t n = 0; n < g.node_count(); ++n) kept += keep[n];
    for (const Edge& e : g.edges)
        if (keep[e.source] && keep[e.target]) ++indeg[e.target];
    std::vector<std::size_t> ready;
    for (std::size_t n = 0; n < g.node_count(); ++n)
        if (keep[n] && indeg[n] == 0) ready.push_back(n);
    std::size_t removed = 0;
    while (!ready.empty()) {
        const std::size_t n = ready.back();
        ready.pop_back();
        ++removed;
        for (const Edge& e : g.out(n))
            if (keep[e.target] && --indeg[e.target] == 0) ready.push_back(e.target);
    }
    return removed == kept;
}

/// Outcome of a structural-bijection check between two state graphs.
struct IsoResult {
    bool ok = false;
    /// First mismatch found, empty when ok.
    std::string mismatch;
    /// mapping[i] = node of the other graph matched to node i.
    std::vector<std::size_t> mapping;
};

/// Verifies that `map_node` is a bijection between the nodes of `a` and `b`
/// that sends node 0 to node 0 and carries every edge (u, l, v) of `a` to an
/// edge (f(u), map_label(l), f(v)) of `b`, with equal edge counts.
template <class A, class B, class HashB = std::hash<B>, class MapNode, class MapLabel>
IsoResult check_graph_iso(const StateGraph<A>& a, const StateGraph<B>& b, MapNode&& map_node, MapLabel&& map_label) {
    IsoResult r;
    if (a.node_count() != b.node_count()) {
        r.mismatch = "node counts differ: " + std::to_string(a.node_count()) + " vs " + std::to_string(b.node_count());
        return r;
    }
    if (a.edge_count() != b.edge_count()) {
        r.mismatch = "edge counts differ: " + std::to_string(a.edge_count()) + " vs " + std::to_string(b.edge_count());
        return r;
    }
    std::unordered_map<B, std::size_t, HashB> index;
    for (std::size_t i = 0; i < b.node_count(); ++i) index.emplace(b.nodes[i], i);
    std::vector<bool> used(b.node_count(), false);
    r.mapping.resize(a.node_count());
    for (std::size_t i = 0; i < a.node_count(); ++i) {
        auto it = index.find(map_node(a.nodes[i]));
        if (it == index.end()) {
            r.mismatch = "node " + std::to_string(i) + " has no counterpart";
            return r;
        }
        if (used[it->second]) {
            r.mismatch = "node " + std::to_string(i) + " maps onto an already matched node";
            return r;
        }
        used[it->second] = true;
        r.mapping[i] = it->second;
    }
    if (!a.nodes.empty() && r.mapping[0] != 0) {
        r.mismatch = "initial nodes do not correspond";
        return r;
    }
    struct EdgeHash {
        std::size_t operator()(const Edge& e) const noexcept {
            return (e.source * 0x9e3779b97f4a7c15ull) ^ (e.label * 0xc2b2ae3d27d4eb4full) ^ e.target;
        }
    };
    std::unordered_set<Edge, EdgeHash> b_edges(b.edges.begin(), b.edges.end());
    for (const Edge& e : a.edges) {
        const Edge mapped{r.mapping[e.source], map_label(e.label), r.mapping[e.target]};
        if (!b_edges.count(mapped)) {
            r.mismatch = "edge " + std::to_string(e.source) + " -[" + std::to_string(e.label) + "]-> " +
                         std::to_string(e.target) + " has no counterpart";
            return r;
        }
    }
    r.ok = true;
    return r;
}

} // namespace imds
