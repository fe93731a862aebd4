#pragma once

// The Labeled Transition System: configurations reachable from the initial
// one under interleaved execution of actions.

#include <sstream>
#include <string>
#include <vector>

#include "imds/graph.hpp"
#include "imds/model.hpp"

namespace imds {

/// Edge labels are action ids.
using Lts = StateGraph<Configuration>;

/// Successors in action-id order; shared by build_lts and the simulator checks.
inline std::vector<std::vector<std::size_t>> actions_by_state(const SystemModel& m) {
    std::vector<std::vector<std::size_t>> index;
    std::vector<std::size_t> base(m.servers.size() + 1, 0);
    for (std::size_t s = 0; s < m.servers.size(); ++s) base[s + 1] = base[s] + m.servers[s].values.size();
    index.resize(base.back());
    for (std::size_t i = 0; i < m.actions.size(); ++i)
        index[base[m.actions[i].in_state.server] + m.actions[i].in_state.value].push_back(i);
    return index;
}

/// BFS from the initial configuration; at each node the enabled actions are
/// expanded in ascending id order. Throws LimitExceeded on state explosion.
inline Lts build_lts(const SystemModel& m, const Limits& limits = {}) {
    // Enabled actions are found through the (server, value) index. Walking
    // servers in order keeps the expansion in ascending id order only when
    // actions are sorted by state, so fall back to a plain scan otherwise.
    const bool sorted = std::is_sorted(m.actions.begin(), m.actions.end(), [](const Action& a, const Action& b) {
        return detail::action_key(a) < detail::action_key(b);
    });
    const auto by_state = actions_by_state(m);
    std::vector<std::size_t> base(m.servers.size() + 1, 0);
    for (std::size_t s = 0; s < m.servers.size(); ++s) base[s + 1] = base[s] + m.servers[s].values.size();

    auto expand = [&](const Configuration& c, auto&& emit) {
        auto fire = [&](std::size_t id) {
            const Action& a = m.actions[id];
            if (!is_enabled(c, a)) return;
            Configuration next = c;
            next.values[a.out_state.server] = static_cast<std::uint32_t>(a.out_state.value);
            next.messages[a.in_message.agent] = a.out_message;
            emit(id, std::move(next));
        };
        if (sorted) {
            for (std::size_t s = 0; s < c.values.size(); ++s)
                for (std::size_t id : by_state[base[s] + c.values[s]]) fire(id);
        } else {
            for (std::size_t id = 0; id < m.actions.size(); ++id) fire(id);
        }
    };
    return explore<Configuration>(initial_configuration(m), expand, limits, "LTS");
}

inline bool is_dead_end(const Lts& lts, std::size_t n) { return lts.out_degree(n) == 0; }

/// One `node` line per configuration and one `edge` line per transition.
inline std::string lts_dump(const SystemModel& m, const Lts& lts) {
    std::ostringstream out;
    out << "lts nodes=" << lts.node_count() << " edges=" << lts.edge_count() << "\n";
    for (std::size_t n = 0; n < lts.node_count(); ++n)
        out << "node " << n << " enabled=" << lts.out_degree(n) << " " << configuration_text(m, lts.nodes[n]) << "\n";
    for (const Edge& e : lts.edges)
        out << "edge " << e.source << " " << e.target << " " << action_label(m, e.label) << "\n";
    return out.str();
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}
} // namespace detail

inline std::string lts_dot(const SystemModel& m, const Lts& lts) {
    std::ostringstream out;
    out << "digraph lts {\n  node [shape=box, fontsize=10];\n";
    for (std::size_t n = 0; n < lts.node_count(); ++n) {
        out << "  n" << n << " [label=\"" << detail::dot_escape(configuration_text(m, lts.nodes[n])) << "\"";
        if (n == 0) out << ", style=bold";
        if (lts.out_degree(n) == 0) out << ", color=red";
        out << "];\n";
    }
    for (const Edge& e : lts.edges)
        out << "  n" << e.source << " -> n" << e.target << " [label=\""
            << detail::dot_escape(action_label(m, e.label)) << "\"];\n";
    out << "}\n";
    return out.str();
}

} // namespace imds
