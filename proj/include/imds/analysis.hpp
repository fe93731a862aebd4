#pragma once

// Deadlock and termination verdicts computed directly on a complete LTS.
//
//  total deadlock      some reachable node has a pending message and no
//                      enabled action
//  partial (agent a)   some reachable T has a's message pending and no node
//                      reachable from T (T included) enables an action of a
//  partial (server s)  same, with a message pending at s and actions whose
//                      state belongs to s
//  termination         per agent: can (a terminated node is reachable) and
//                      must (every maximal path terminates a); total: same
//                      for "no message left"

#include <cstdint>
#include <optional>
#include <sstream>
#include <utility>
#include <string>
#include <vector>

#include "imds/lts.hpp"
#include "imds/model.hpp"

namespace imds {

enum class VerdictKind {
    total_deadlock,
    partial_deadlock_agent,
    partial_deadlock_server,
    total_termination,
    agent_termination,
    dead_action,
};

inline const char* verdict_kind_name(VerdictKind k) {
    switch (k) {
    case VerdictKind::total_deadlock: return "total-deadlock";
    case VerdictKind::partial_deadlock_agent: return "partial-deadlock-agent";
    case VerdictKind::partial_deadlock_server: return "partial-deadlock-server";
    case VerdictKind::total_termination: return "total-termination";
    case VerdictKind::agent_termination: return "agent-termination";
    case VerdictKind::dead_action: return "dead-action";
    }
    return "?";
}

struct Verdict {
    VerdictKind kind = VerdictKind::total_deadlock;
    /// Agent, server or action label the verdict is about.
    std::optional<std::string> subject;
    bool holds = false;
    std::optional<Trace> witness;

    /// Stable identifier: `kind` or `kind:subject`.
    std::string id() const { return std::string(verdict_kind_name(kind)) + (subject ? ":" + *subject : ""); }
    bool is_deadlock() const {
        return kind == VerdictKind::total_deadlock || kind == VerdictKind::partial_deadlock_agent ||
               kind == VerdictKind::partial_deadlock_server;
    }
};

/// Among the nearest deadlocked nodes the witness ends in one with the most
/// pending messages, so a deadlock of every live agent is preferred over one
/// left behind by a terminated agent.
inline Verdict detect_total_deadlock(const Lts& lts) {
    const auto dist = distances(lts);
    std::vector<bool> goal(lts.node_count(), false);
    std::optional<std::pair<std::size_t, std::size_t>> best;  // (distance, -pending)
    for (std::size_t n = 0; n < lts.node_count(); ++n) {
        if (lts.nodes[n].pending() == 0 || lts.out_degree(n) != 0) continue;
        const std::pair<std::size_t, std::size_t> key{dist[n], SIZE_MAX - lts.nodes[n].pending()};
        if (!best || key < *best) best = key;
    }
    for (std::size_t n = 0; n < lts.node_count() && best; ++n)
        goal[n] = lts.out_degree(n) == 0 && dist[n] == best->first &&
                  SIZE_MAX - lts.nodes[n].pending() == best->second;
    Verdict v{VerdictKind::total_deadlock, std::nullopt, false, shortest_path_to(lts, goal)};
    v.holds = v.witness.has_value();
    return v;
}

namespace detail {

/// Nodes where `pending` holds but no node reachable from them has an edge
/// whose action satisfies `owned`.
template <class Pending, class Owned>
std::vector<bool> never_helped(const Lts& lts, const SystemModel& m, Pending&& pending, Owned&& owned) {
    std::vector<bool> acts(lts.node_count(), false);
    for (const Edge& e : lts.edges)
        if (owned(m.actions[e.label])) acts[e.source] = true;
    const std::vector<bool> helped = backward_reachable(lts, acts);
    std::vector<bool> goal(lts.node_count());
    for (std::size_t n = 0; n < lts.node_count(); ++n) goal[n] = pending(lts.nodes[n]) && !helped[n];
    return goal;
}

} // namespace detail

inline std::vector<Verdict> detect_partial_deadlock_agents(const Lts& lts, const SystemModel& m) {
    std::vector<Verdict> out;
    for (std::size_t a = 0; a < m.agents.size(); ++a) {
        const auto goal = detail::never_helped(
            lts, m, [a](const Configuration& c) { return c.messages[a].has_value(); },
            [a](const Action& act) { return act.in_message.agent == a; });
        Verdict v{VerdictKind::partial_deadlock_agent, m.agents[a], false, shortest_path_to(lts, goal)};
        v.holds = v.witness.has_value();
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<Verdict> detect_partial_deadlock_servers(const Lts& lts, const SystemModel& m) {
    std::vector<Verdict> out;
    for (std::size_t s = 0; s < m.servers.size(); ++s) {
        const auto goal = detail::never_helped(
            lts, m,
            [s](const Configuration& c) {
                for (const auto& msg : c.messages)
                    if (msg && msg->server == s) return true;
                return false;
            },
            [s](const Action& act) { return act.in_state.server == s; });
        Verdict v{VerdictKind::partial_deadlock_server, m.servers[s].name, false, shortest_path_to(lts, goal)};
        v.holds = v.witness.has_value();
        out.push_back(std::move(v));
    }
    return out;
}

struct TerminationInfo {
    bool can = false;
    bool must = false;
    std::optional<Trace> witness;
};

struct TerminationReport {
    std::vector<TerminationInfo> agents;
    TerminationInfo total;
};

namespace detail {

/// `alive(node)` marks the nodes where the subject has not terminated yet.
/// Every maximal path leaves the alive region iff the region has no cycle
/// and no dead end.
template <class Alive>
TerminationInfo termination_of(const Lts& lts, Alive&& alive) {
    TerminationInfo info;
    std::vector<bool> goal(lts.node_count()), live(lts.node_count());
    bool dead_end_alive = false;
    for (std::size_t n = 0; n < lts.node_count(); ++n) {
        live[n] = alive(lts.nodes[n]);
        goal[n] = !live[n];
        if (live[n] && lts.out_degree(n) == 0) dead_end_alive = true;
    }
    info.witness = shortest_path_to(lts, goal);
    info.can = info.witness.has_value();
    info.must = !dead_end_alive && induced_acyclic(lts, live);
    return info;
}

} // namespace detail

inline TerminationReport detect_termination(const Lts& lts, const SystemModel& m) {
    TerminationReport r;
    for (std::size_t a = 0; a < m.agents.size(); ++a)
        r.agents.push_back(
            detail::termination_of(lts, [a](const Configuration& c) { return c.messages[a].has_value(); }));
    r.total = detail::termination_of(lts, [](const Configuration& c) { return c.pending() > 0; });
    return r;
}

/// Actions labelling no edge of the LTS.
inline std::vector<std::size_t> dead_actions(const Lts& lts, const SystemModel& m) {
    std::vector<bool> fired(m.actions.size(), false);
    for (const Edge& e : lts.edges) fired[e.label] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m.actions.size(); ++i)
        if (!fired[i]) out.push_back(i);
    return out;
}

struct Report {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::vector<Verdict> verdicts;
    TerminationReport termination;
    std::vector<std::size_t> dead;

    bool any_deadlock() const {
        for (const Verdict& v : verdicts)
            if (v.is_deadlock() && v.holds) return true;
        return false;
    }
    const Verdict* find(const std::string& id) const {
        for (const Verdict& v : verdicts)
            if (v.id() == id) return &v;
        return nullptr;
    }
};

/// All verdicts in a fixed order: total deadlock, agent partials, server
/// partials, total termination, agent termination, dead actions.
inline Report analyze(const Lts& lts, const SystemModel& m) {
    Report r;
    r.nodes = lts.node_count();
    r.edges = lts.edge_count();
    r.verdicts.push_back(detect_total_deadlock(lts));
    for (auto& v : detect_partial_deadlock_agents(lts, m)) r.verdicts.push_back(std::move(v));
    for (auto& v : detect_partial_deadlock_servers(lts, m)) r.verdicts.push_back(std::move(v));
    r.termination = detect_termination(lts, m);
    r.verdicts.push_back({VerdictKind::total_termination, std::nullopt, r.termination.total.can, r.termination.total.witness});
    for (std::size_t a = 0; a < m.agents.size(); ++a)
        r.verdicts.push_back({VerdictKind::agent_termination, m.agents[a], r.termination.agents[a].can,
                              r.termination.agents[a].witness});
    r.dead = dead_actions(lts, m);
    for (std::size_t id : r.dead) r.verdicts.push_back({VerdictKind::dead_action, action_label(m, id), true, std::nullopt});
    return r;
}

/// Counterexample steps: (action label, source configuration, target configuration).
struct TraceStep {
    std::string action;
    std::string source;
    std::string target;
};

inline std::vector<TraceStep> trace_steps(const SystemModel& m, const Lts& lts, const Trace& t) {
    std::vector<TraceStep> out;
    for (std::size_t i = 0; i < t.labels.size(); ++i)
        out.push_back({action_label(m, t.labels[i]), configuration_text(m, lts.nodes[t.nodes[i]]),
                       configuration_text(m, lts.nodes[t.nodes[i + 1]])});
    return out;
}

inline std::string report_text(const SystemModel& m, const Lts& lts, const Report& r) {
    std::ostringstream out;
    out << "model " << m.name << ": " << r.nodes << " configurations, " << r.edges << " transitions\n";
    for (const Verdict& v : r.verdicts) {
        if (v.kind == VerdictKind::agent_termination || v.kind == VerdictKind::total_termination) continue;
        if (v.kind == VerdictKind::dead_action) continue;
        out << "  " << v.id() << ": " << (v.holds ? "HOLDS" : "no");
        if (v.witness) out << " (witness length " << v.witness->length() << ")";
        out << "\n";
    }
    for (std::size_t a = 0; a < m.agents.size(); ++a) {
        const auto& t = r.termination.agents[a];
        out << "  termination " << m.agents[a] << ": can=" << (t.can ? "yes" : "no")
            << " must=" << (t.must ? "yes" : "no") << "\n";
    }
    out << "  termination (total): can=" << (r.termination.total.can ? "yes" : "no")
        << " must=" << (r.termination.total.must ? "yes" : "no") << "\n";
    out << "  dead actions: " << r.dead.size() << "\n";
    for (std::size_t id : r.dead) out << "    " << action_label(m, id) << "\n";
    for (const Verdict& v : r.verdicts) {
        if (!v.holds || !v.witness || !v.is_deadlock()) continue;
        out << "counterexample " << v.id() << ":\n";
        for (const TraceStep& s : trace_steps(m, lts, *v.witness))
            out << "  " << s.source << "\n    --" << s.action << "-->\n";
        out << "  " << configuration_text(m, lts.nodes[v.witness->nodes.back()]) << "\n";
    }
    return out.str();
}

} // namespace imds
