#pragma once

// JSON documents for models, verdict reports, automata and simulator
// sessions. Every top-level document carries `schema_version`.

#include <string>
#include <vector>

#include <json.hpp>

#include "imds/analysis.hpp"
#include "imds/automata.hpp"
#include "imds/model.hpp"
#include "imds/simulator.hpp"

namespace imds {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

inline Json to_json(const SystemModel& m, const Message& msg) {
    return {{"agent", m.agents[msg.agent]},
            {"server", m.servers[msg.server].name},
            {"service", m.servers[msg.server].services[msg.service]}};
}

inline Json to_json(const SystemModel& m, const ServerState& p) {
    return {{"server", m.servers[p.server].name}, {"value", m.servers[p.server].values[p.value]}};
}

inline Json configuration_json(const SystemModel& m, const Configuration& c) {
    Json messages = Json::object(), values = Json::object();
    for (std::size_t a = 0; a < c.messages.size(); ++a)
        messages[m.agents[a]] = c.messages[a] ? Json(message_text(m, *c.messages[a])) : Json(nullptr);
    for (std::size_t s = 0; s < c.values.size(); ++s) values[m.servers[s].name] = m.servers[s].values[c.values[s]];
    return {{"messages", messages}, {"states", values}};
}

inline Json action_json(const SystemModel& m, std::size_t id) {
    const Action& a = m.actions[id];
    return {{"id", id},
            {"label", action_label(m, id)},
            {"text", action_text(m, a)},
            {"in_message", to_json(m, a.in_message)},
            {"in_state", to_json(m, a.in_state)},
            {"out_message", a.out_message ? to_json(m, *a.out_message) : Json(nullptr)},
            {"out_state", to_json(m, a.out_state)},
            {"terminating", a.terminating()}};
}

inline Json model_json(const SystemModel& m) {
    Json servers = Json::array(), agents = Json::array(), actions = Json::array();
    for (std::size_t s = 0; s < m.servers.size(); ++s) {
        const auto& srv = m.servers[s];
        servers.push_back({{"name", srv.name},
                           {"values", srv.values},
                           {"services", srv.services},
                           {"initial", m.initial_value[s] ? Json(srv.values[*m.initial_value[s]]) : Json(nullptr)}});
    }
    for (std::size_t a = 0; a < m.agents.size(); ++a)
        agents.push_back({{"name", m.agents[a]},
                          {"initial", m.initial_message[a] ? Json(message_text(m, *m.initial_message[a])) : Json(nullptr)}});
    for (std::size_t i = 0; i < m.actions.size(); ++i) actions.push_back(action_json(m, i));
    return {{"schema_version", schema_version},
            {"name", m.name},
            {"servers", servers},
            {"agents", agents},
            {"actions", actions}};
}

inline Json trace_json(const SystemModel& m, const Lts& lts, const Trace& t) {
    Json steps = Json::array(), labels = Json::array();
    for (const TraceStep& s : trace_steps(m, lts, t)) {
        labels.push_back(s.action);
        steps.push_back({{"action", s.action}, {"from", s.source}, {"to", s.target}});
    }
    return {{"length", t.length()},
            {"actions", labels},
            {"steps", steps},
            {"final", configuration_json(m, lts.nodes[t.nodes.back()])}};
}

inline Json report_json(const SystemModel& m, const Lts& lts, const Report& r) {
    Json verdicts = Json::array();
    for (const Verdict& v : r.verdicts) {
        verdicts.push_back({{"id", v.id()},
                            {"kind", verdict_kind_name(v.kind)},
                            {"subject", v.subject ? Json(*v.subject) : Json(nullptr)},
                            {"holds", v.holds},
                            {"witness", v.witness ? trace_json(m, lts, *v.witness) : Json(nullptr)}});
    }
    Json agents = Json::array();
    for (std::size_t a = 0; a < m.agents.size(); ++a)
        agents.push_back({{"agent", m.agents[a]},
                          {"can", r.termination.agents[a].can},
                          {"must", r.termination.agents[a].must}});
    Json dead = Json::array();
    for (std::size_t id : r.dead) dead.push_back(action_label(m, id));
    return {{"schema_version", schema_version},
            {"model", m.name},
            {"nodes", r.nodes},
            {"edges", r.edges},
            {"any_deadlock", r.any_deadlock()},
            {"verdicts", verdicts},
            {"termination", {{"agents", agents}, {"total", {{"can", r.termination.total.can}, {"must", r.termination.total.must}}}}},
            {"dead_actions", dead}};
}

inline std::string automaton_id(const SystemModel& m, AutomataKind k, std::size_t i) {
    return std::string(automata_kind_name(k)) + ":" + (k == AutomataKind::sda3 ? m.servers[i].name : m.agents[i]);
}

inline Json automata_json(const SystemModel& m, const std::vector<ServerAutomaton>& sda,
                          const std::vector<AgentAutomaton>& ada) {
    Json servers = Json::array();
    for (const auto& a : sda) {
        const auto& srv = m.servers[a.server];
        Json transitions = Json::array(), alphabet = Json::array(), inputs = Json::array();
        for (const auto& t : a.transitions)
            transitions.push_back({{"action", t.action},
                                   {"label", sda_label(m, t)},
                                   {"from", srv.values[t.from]},
                                   {"to", srv.values[t.to]},
                                   {"input", message_text(m, t.input)},
                                   {"output", t.output ? Json(message_text(m, *t.output)) : Json(nullptr)}});
        for (const auto& msg : a.alphabet) alphabet.push_back(message_text(m, msg));
        for (const auto& msg : a.initial_inputs) inputs.push_back(message_text(m, msg));
        servers.push_back({{"id", automaton_id(m, AutomataKind::sda3, a.server)},
                           {"server", srv.name},
                           {"nodes", srv.values},
                           {"initial", srv.values[a.initial]},
                           {"transitions", transitions},
                           {"input_alphabet", alphabet},
                           {"initial_input_set", inputs}});
    }
    Json agents = Json::array();
    for (const auto& a : ada) {
        Json nodes = Json::array(), transitions = Json::array();
        for (std::size_t n = 0; n <= a.nodes.size(); ++n) nodes.push_back(ada_node_label(m, a, n));
        for (const auto& t : a.transitions)
            transitions.push_back({{"action", t.action},
                                   {"label", ada_label(m, t)},
                                   {"from", ada_node_label(m, a, t.from)},
                                   {"to", ada_node_label(m, a, t.to)},
                                   {"input", state_text(m, t.input)},
                                   {"output", state_text(m, t.output)}});
        agents.push_back({{"id", automaton_id(m, AutomataKind::ada3, a.agent)},
                          {"agent", m.agents[a.agent]},
                          {"nodes", nodes},
                          {"initial", a.initial ? Json(ada_node_label(m, a, *a.initial)) : Json(nullptr)},
                          {"terminal", "t"},
                          {"transitions", transitions}});
    }
    return {{"schema_version", schema_version}, {"sda3", servers}, {"ada3", agents}};
}

/// Snapshot of a session: a pure function of (model, view, history, pin).
inline Json session_json(const Session& s, const std::string& id = {}) {
    const SystemModel& m = *s.model;
    const auto listed = listed_transitions(s);
    Json automata = Json::array();
    for (std::size_t i = 0; i < automaton_count(s); ++i) {
        Json transitions = Json::array();
        for (const auto& [lt, on] : listed) {
            if (lt.automaton != i) continue;
            transitions.push_back({{"action", lt.action},
                                   {"label", action_label(m, lt.action)},
                                   {"symbol", s.view == AutomataKind::sda3
                                                  ? sda_label(m, s.sda[i].transitions[lt.transition])
                                                  : ada_label(m, s.ada[i].transitions[lt.transition])},
                                   {"enabled", on}});
        }
        Json a = {{"id", automaton_id(m, s.view, i)}};
        if (s.view == AutomataKind::sda3) {
            Json inputs = Json::array();
            for (const auto& msg : s.sda_position.inputs[i]) inputs.push_back(message_text(m, msg));
            a["name"] = m.servers[i].name;
            a["current"] = m.servers[i].values[s.sda_position.nodes[i]];
            a["input_set"] = inputs;
        } else {
            const auto& node = s.ada_position.nodes[i];
            a["name"] = m.agents[i];
            a["current"] = node ? ada_node_label(m, s.ada[i], *node) : std::string("t");
            a["terminated"] = !node.has_value();
        }
        a["transitions"] = transitions;
        automata.push_back(std::move(a));
    }
    Json history = Json::array(), enabled_labels = Json::array();
    for (std::size_t a : s.history) history.push_back(action_label(m, a));
    const auto on = enabled(s);
    for (std::size_t a : on) enabled_labels.push_back(action_label(m, a));
    Json out = {{"schema_version", schema_version}};
    if (!id.empty()) out["id"] = id;
    out["model"] = m.name;
    out["view"] = automata_kind_name(s.view);
    out["automata"] = automata;
    if (s.view == AutomataKind::ada3) {
        Json vec = Json::array();
        for (std::size_t sv = 0; sv < s.ada_position.vector.size(); ++sv)
            vec.push_back(state_text(m, {sv, s.ada_position.vector[sv]}));
        out["global_input_vector"] = vec;
    }
    const Configuration c = current_configuration(s);
    out["configuration"] = configuration_json(m, c);
    out["enabled"] = enabled_labels;
    out["deadlocked"] = on.empty() && c.pending() > 0;
    out["terminated"] = c.pending() == 0;
    out["history"] = history;
    if (s.pinned) {
        Json actions = Json::array();
        for (std::size_t a : *s.pinned) actions.push_back(action_label(m, a));
        out["pin"] = {{"actions", actions}, {"cursor", s.cursor}, {"length", s.pinned->size()}};
    } else {
        out["pin"] = nullptr;
    }
    return out;
}

} // namespace imds
