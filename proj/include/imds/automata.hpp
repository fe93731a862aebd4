#pragma once

// Distributed automata derived from a model. Server automata (SDA3) have the
// server's values as nodes and read messages from an unordered input set;
// agent automata (ADA3) have the agent's messages as nodes plus a terminal
// node t and read server states from a global input vector.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "imds/graph.hpp"
#include "imds/lts.hpp"
#include "imds/model.hpp"
#include "imds/views.hpp"

namespace imds {

enum class AutomataKind { sda3, ada3 };

inline const char* automata_kind_name(AutomataKind k) { return k == AutomataKind::sda3 ? "sda3" : "ada3"; }

struct SdaTransition {
    std::size_t from = 0;
    Message input;
    /// Empty for terminating actions.
    std::optional<Message> output;
    std::size_t to = 0;
    std::size_t action = 0;
};

struct ServerAutomaton {
    std::size_t server = 0;
    /// Value indices of the server; node i is value i.
    std::size_t node_count = 0;
    std::size_t initial = 0;
    std::vector<SdaTransition> transitions;
    /// Messages addressed to this server, in agent then first-use order.
    std::vector<Message> alphabet;
    std::vector<Message> initial_inputs;
};

struct AdaTransition {
    std::size_t from = 0;
    ServerState input;
    ServerState output;
    /// Node index, or `terminal()` of the owning automaton.
    std::size_t to = 0;
    std::size_t action = 0;
};

struct AgentAutomaton {
    std::size_t agent = 0;
    std::vector<Message> nodes;
    std::optional<std::size_t> initial;
    std::vector<AdaTransition> transitions;

    std::size_t terminal() const noexcept { return nodes.size(); }
    std::optional<std::size_t> node_of(const Message& m) const {
        auto it = std::find(nodes.begin(), nodes.end(), m);
        if (it == nodes.end()) return std::nullopt;
        return static_cast<std::size_t>(it - nodes.begin());
    }
};

inline std::vector<ServerAutomaton> to_sda3(const SystemModel& m) {
    std::vector<ServerAutomaton> out;
    for (std::size_t s = 0; s < m.servers.size(); ++s) {
        ServerAutomaton sa;
        sa.server = s;
        sa.node_count = m.servers[s].values.size();
        sa.initial = m.initial_value[s].value_or(0);
        for (std::size_t i = 0; i < m.actions.size(); ++i) {
            const Action& a = m.actions[i];
            if (a.in_state.server != s) continue;
            sa.transitions.push_back({a.in_state.value, a.in_message, a.out_message, a.out_state.value, i});
        }
        for (std::size_t ag = 0; ag < m.agents.size(); ++ag)
            for (const Message& msg : agent_messages(m, ag))
                if (msg.server == s) sa.alphabet.push_back(msg);
        for (const auto& msg : m.initial_message)
            if (msg && msg->server == s) sa.initial_inputs.push_back(*msg);
        std::sort(sa.initial_inputs.begin(), sa.initial_inputs.end());
        out.push_back(std::move(sa));
    }
    return out;
}

inline std::vector<AgentAutomaton> to_ada3(const SystemModel& m) {
    std::vector<AgentAutomaton> out;
    for (std::size_t ag = 0; ag < m.agents.size(); ++ag) {
        AgentAutomaton aa;
        aa.agent = ag;
        aa.nodes = agent_messages(m, ag);
        if (m.initial_message[ag]) aa.initial = aa.node_of(*m.initial_message[ag]);
        for (std::size_t i = 0; i < m.actions.size(); ++i) {
            const Action& a = m.actions[i];
            if (a.in_message.agent != ag) continue;
            const std::size_t to = a.out_message ? *aa.node_of(*a.out_message) : aa.terminal();
            aa.transitions.push_back({*aa.node_of(a.in_message), a.in_state, a.out_state, to, i});
        }
        out.push_back(std::move(aa));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Global positions

struct SdaPosition {
    std::vector<std::uint32_t> nodes;
    /// Input set per server, kept sorted.
    std::vector<std::vector<Message>> inputs;

    friend bool operator==(const SdaPosition&, const SdaPosition&) = default;
};

struct AdaPosition {
    /// Current node per agent; empty once the agent has reached t.
    std::vector<std::optional<std::uint32_t>> nodes;
    /// Global input vector: one value per server, in declaration order.
    std::vector<std::uint32_t> vector;

    friend bool operator==(const AdaPosition&, const AdaPosition&) = default;
};

struct SdaPositionHash {
    std::size_t operator()(const SdaPosition& p) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        auto mix = [&h](std::size_t v) { h = (h ^ v) * 0x100000001b3ull; };
        for (auto v : p.nodes) mix(v);
        for (const auto& set : p.inputs) {
            mix(0xfffe);
            for (const Message& m : set) {
                mix(m.agent);
                mix(m.server);
                mix(m.service);
            }
        }
        return h;
    }
};

struct AdaPositionHash {
    std::size_t operator()(const AdaPosition& p) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        auto mix = [&h](std::size_t v) { h = (h ^ v) * 0x100000001b3ull; };
        for (const auto& n : p.nodes) mix(n ? *n + 1 : 0);
        for (auto v : p.vector) mix(v);
        return h;
    }
};

inline SdaPosition initial_position(const std::vector<ServerAutomaton>& sda) {
    SdaPosition p;
    for (const auto& a : sda) {
        p.nodes.push_back(static_cast<std::uint32_t>(a.initial));
        p.inputs.push_back(a.initial_inputs);
    }
    return p;
}

inline AdaPosition initial_position(const std::vector<AgentAutomaton>& ada, const SystemModel& m) {
    AdaPosition p;
    for (const auto& a : ada) {
        if (a.initial) p.nodes.emplace_back(static_cast<std::uint32_t>(*a.initial));
        else p.nodes.emplace_back(std::nullopt);
    }
    for (const auto& v : m.initial_value) p.vector.push_back(static_cast<std::uint32_t>(v.value_or(0)));
    return p;
}

/// An enabled or listed transition: automaton index and local transition index.
struct LocalTransition {
    std::size_t automaton = 0;
    std::size_t transition = 0;
    std::size_t action = 0;
};

/// Transitions leaving the current nodes, each flagged enabled iff its input
/// symbol is present in the input set.
inline std::vector<std::pair<LocalTransition, bool>> outgoing(const std::vector<ServerAutomaton>& sda,
                                                              const SdaPosition& p) {
    std::vector<std::pair<LocalTransition, bool>> out;
    for (std::size_t s = 0; s < sda.size(); ++s) {
        for (std::size_t t = 0; t < sda[s].transitions.size(); ++t) {
            const SdaTransition& tr = sda[s].transitions[t];
            if (tr.from != p.nodes[s]) continue;
            const bool on = std::binary_search(p.inputs[s].begin(), p.inputs[s].end(), tr.input);
            out.push_back({{s, t, tr.action}, on});
        }
    }
    return out;
}

inline std::vector<std::pair<LocalTransition, bool>> outgoing(const std::vector<AgentAutomaton>& ada,
                                                              const AdaPosition& p) {
    std::vector<std::pair<LocalTransition, bool>> out;
    for (std::size_t a = 0; a < ada.size(); ++a) {
        if (!p.nodes[a]) continue;
        for (std::size_t t = 0; t < ada[a].transitions.size(); ++t) {
            const AdaTransition& tr = ada[a].transitions[t];
            if (tr.from != *p.nodes[a]) continue;
            const bool on = p.vector[tr.input.server] == tr.input.value;
            out.push_back({{a, t, tr.action}, on});
        }
    }
    return out;
}

template <class Automata, class Position>
std::vector<LocalTransition> enabled_transitions(const Automata& automata, const Position& p) {
    std::vector<LocalTransition> out;
    for (const auto& [lt, on] : outgoing(automata, p))
        if (on) out.push_back(lt);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.action < b.action; });
    return out;
}

/// Fires (p, m/m', p'): removes m from the own input set and inserts m' into
/// the input set of the server m' is addressed to.
inline SdaPosition fire(const std::vector<ServerAutomaton>& sda, const SdaPosition& p, const LocalTransition& lt) {
    const SdaTransition& tr = sda[lt.automaton].transitions[lt.transition];
    SdaPosition next = p;
    next.nodes[lt.automaton] = static_cast<std::uint32_t>(tr.to);
    auto& own = next.inputs[lt.automaton];
    own.erase(std::find(own.begin(), own.end(), tr.input));
    if (tr.output) {
        auto& dst = next.inputs[tr.output->server];
        dst.insert(std::upper_bound(dst.begin(), dst.end(), *tr.output), *tr.output);
    }
    return next;
}

/// Fires (m, p/p', m'): exchanges p for p' in the global input vector.
inline AdaPosition fire(const std::vector<AgentAutomaton>& ada, const AdaPosition& p, const LocalTransition& lt) {
    const AgentAutomaton& a = ada[lt.automaton];
    const AdaTransition& tr = a.transitions[lt.transition];
    AdaPosition next = p;
    next.vector[tr.input.server] = static_cast<std::uint32_t>(tr.output.value);
    if (tr.to == a.terminal()) next.nodes[lt.automaton].reset();
    else next.nodes[lt.automaton] = static_cast<std::uint32_t>(tr.to);
    return next;
}

/// Edge labels are action ids.
using SdaGraph = StateGraph<SdaPosition>;
using AdaGraph = StateGraph<AdaPosition>;

inline SdaGraph global_graph(const std::vector<ServerAutomaton>& sda, const Limits& limits = {}) {
    auto expand = [&](const SdaPosition& p, auto&& emit) {
        for (const LocalTransition& lt : enabled_transitions(sda, p)) emit(lt.action, fire(sda, p, lt));
    };
    return explore<SdaPosition, SdaPositionHash>(initial_position(sda), expand, limits, "SDA3 global graph");
}

inline AdaGraph global_graph(const std::vector<AgentAutomaton>& ada, const SystemModel& m, const Limits& limits = {}) {
    auto expand = [&](const AdaPosition& p, auto&& emit) {
        for (const LocalTransition& lt : enabled_transitions(ada, p)) emit(lt.action, fire(ada, p, lt));
    };
    return explore<AdaPosition, AdaPositionHash>(initial_position(ada, m), expand, limits, "ADA3 global graph");
}

inline SdaPosition sda_position_of(const Configuration& c) {
    SdaPosition p;
    p.nodes = c.values;
    p.inputs.resize(c.values.size());
    for (const auto& msg : c.messages)
        if (msg) p.inputs[msg->server].push_back(*msg);
    for (auto& set : p.inputs) std::sort(set.begin(), set.end());
    return p;
}

inline AdaPosition ada_position_of(const std::vector<AgentAutomaton>& ada, const Configuration& c) {
    AdaPosition p;
    for (std::size_t a = 0; a < c.messages.size(); ++a) {
        std::optional<std::uint32_t> node;
        if (c.messages[a]) {
            // A message outside the automaton maps to an impossible node.
            auto n = ada[a].node_of(*c.messages[a]);
            node = static_cast<std::uint32_t>(n.value_or(ada[a].nodes.size() + 1));
        }
        p.nodes.push_back(node);
    }
    p.vector = c.values;
    return p;
}

inline Configuration configuration_of(const SystemModel& model, const SdaPosition& p) {
    Configuration c;
    c.values = p.nodes;
    c.messages.resize(model.agents.size());
    for (const auto& set : p.inputs)
        for (const Message& m : set) c.messages[m.agent] = m;
    return c;
}

inline Configuration configuration_of(const std::vector<AgentAutomaton>& ada, const AdaPosition& p) {
    Configuration c;
    c.values = p.vector;
    for (std::size_t a = 0; a < p.nodes.size(); ++a) {
        if (p.nodes[a]) c.messages.emplace_back(ada[a].nodes[*p.nodes[a]]);
        else c.messages.emplace_back(std::nullopt);
    }
    return c;
}

namespace automata_detail {

template <class T, class Key>
bool same_multiset(std::vector<T> a, std::vector<T> b, Key&& key) {
    auto less = [&](const T& x, const T& y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (key(a[i]) != key(b[i])) return false;
    return true;
}

inline auto sda_key(const SdaTransition& t) { return std::tuple(t.action, t.from, t.input, t.output, t.to); }
inline auto ada_key(const AdaTransition& t) {
    return std::tuple(t.action, t.from, t.input.server, t.input.value, t.output.server, t.output.value, t.to);
}

} // namespace automata_detail

/// Each automaton must carry exactly its block of actions, then the
/// configuration -> position map must be an edge-preserving bijection.
inline IsoResult check_iso_with_lts(const SystemModel& m, const std::vector<ServerAutomaton>& sda, const SdaGraph& g,
                                    const Lts& lts) {
    const auto expected = to_sda3(m);
    if (expected.size() != sda.size()) return {false, "automaton count differs", {}};
    for (std::size_t s = 0; s < sda.size(); ++s) {
        if (sda[s].server != s || sda[s].initial != expected[s].initial ||
            sda[s].initial_inputs != expected[s].initial_inputs ||
            !automata_detail::same_multiset(sda[s].transitions, expected[s].transitions, automata_detail::sda_key))
            return {false, "server automaton " + m.servers[s].name + " does not match its action block", {}};
    }
    return check_graph_iso<Configuration, SdaPosition, SdaPositionHash>(lts, g, sda_position_of,
                                                                        [](std::size_t l) { return l; });
}

inline IsoResult check_iso_with_lts(const SystemModel& m, const std::vector<AgentAutomaton>& ada, const AdaGraph& g,
                                    const Lts& lts) {
    const auto expected = to_ada3(m);
    if (expected.size() != ada.size()) return {false, "automaton count differs", {}};
    for (std::size_t a = 0; a < ada.size(); ++a) {
        if (ada[a].agent != a || ada[a].nodes != expected[a].nodes || ada[a].initial != expected[a].initial ||
            !automata_detail::same_multiset(ada[a].transitions, expected[a].transitions, automata_detail::ada_key))
            return {false, "agent automaton " + m.agents[a] + " does not match its action block", {}};
    }
    return check_graph_iso<Configuration, AdaPosition, AdaPositionHash>(
        lts, g, [&](const Configuration& c) { return ada_position_of(ada, c); }, [](std::size_t l) { return l; });
}

// ---------------------------------------------------------------------------
// Labels and DOT

inline std::string sda_label(const SystemModel& m, const SdaTransition& t) {
    return message_text(m, t.input) + "/" + (t.output ? message_text(m, *t.output) : std::string("—"));
}

inline std::string ada_label(const SystemModel& m, const AdaTransition& t) {
    return state_text(m, t.input) + "/" + state_text(m, t.output);
}

/// ADA3 node label: `server.service`, or `t`.
inline std::string ada_node_label(const SystemModel& m, const AgentAutomaton& a, std::size_t node) {
    if (node == a.terminal()) return "t";
    const Message& msg = a.nodes[node];
    return m.servers[msg.server].name + "." + m.servers[msg.server].services[msg.service];
}

struct DotFile {
    std::string name;
    std::string text;
};

struct DotOptions {
    /// Draw t even when no transition reaches it.
    bool show_unreachable_terminal = false;
};

namespace automata_detail {

inline void sda_body(std::ostringstream& out, const SystemModel& m, const ServerAutomaton& a, const std::string& prefix,
                     const std::string& indent) {
    const auto& srv = m.servers[a.server];
    for (std::size_t v = 0; v < a.node_count; ++v) {
        out << indent << prefix << v << " [label=\"" << detail::dot_escape(srv.values[v]) << "\"";
        if (v == a.initial) out << ", style=bold";
        out << "];\n";
    }
    for (const auto& t : a.transitions)
        out << indent << prefix << t.from << " -> " << prefix << t.to << " [label=\""
            << detail::dot_escape(sda_label(m, t)) << "\"];\n";
}

inline void ada_body(std::ostringstream& out, const SystemModel& m, const AgentAutomaton& a, const std::string& prefix,
                     const std::string& indent, const DotOptions& opt) {
    bool t_reached = false;
    for (const auto& t : a.transitions) t_reached = t_reached || t.to == a.terminal();
    const std::size_t count = a.nodes.size() + (t_reached || opt.show_unreachable_terminal ? 1 : 0);
    for (std::size_t n = 0; n < count; ++n) {
        out << indent << prefix << n << " [label=\"" << detail::dot_escape(ada_node_label(m, a, n)) << "\"";
        if (a.initial && n == *a.initial) out << ", style=bold";
        if (n == a.terminal()) out << ", shape=doublecircle";
        out << "];\n";
    }
    for (const auto& t : a.transitions)
        out << indent << prefix << t.from << " -> " << prefix << t.to << " [label=\""
            << detail::dot_escape(ada_label(m, t)) << "\"];\n";
}

} // namespace automata_detail

/// One digraph per automaton plus `index.dot` holding all of them as clusters.
inline std::vector<DotFile> export_dot(const SystemModel& m, const std::vector<ServerAutomaton>& sda) {
    std::vector<DotFile> files;
    if (sda.empty()) return files;
    std::ostringstream index;
    index << "digraph sda3 {\n  node [shape=ellipse];\n";
    for (const auto& a : sda) {
        const std::string& name = m.servers[a.server].name;
        std::ostringstream out;
        out << "digraph \"" << detail::dot_escape(name) << "\" {\n  node [shape=ellipse];\n";
        automata_detail::sda_body(out, m, a, "n", "  ");
        out << "}\n";
        files.push_back({"sda3_" + name + ".dot", out.str()});
        index << "  subgraph \"cluster_" << detail::dot_escape(name) << "\" {\n    label=\"" << detail::dot_escape(name)
              << "\";\n";
        automata_detail::sda_body(index, m, a, name + "_", "    ");
        index << "  }\n";
    }
    index << "}\n";
    files.push_back({"index.dot", index.str()});
    return files;
}

inline std::vector<DotFile> export_dot(const SystemModel& m, const std::vector<AgentAutomaton>& ada,
                                       const DotOptions& opt = {}) {
    std::vector<DotFile> files;
    if (ada.empty()) return files;
    std::ostringstream index;
    index << "digraph ada3 {\n  node [shape=ellipse];\n";
    for (const auto& a : ada) {
        const std::string& name = m.agents[a.agent];
        std::ostringstream out;
        out << "digraph \"" << detail::dot_escape(name) << "\" {\n  node [shape=ellipse];\n";
        automata_detail::ada_body(out, m, a, "n", "  ", opt);
        out << "}\n";
        files.push_back({"ada3_" + name + ".dot", out.str()});
        index << "  subgraph \"cluster_" << detail::dot_escape(name) << "\" {\n    label=\"" << detail::dot_escape(name)
              << "\";\n";
        automata_detail::ada_body(index, m, a, name + "_", "    ", opt);
        index << "  }\n";
    }
    index << "}\n";
    files.push_back({"index.dot", index.str()});
    return files;
}

} // namespace imds
