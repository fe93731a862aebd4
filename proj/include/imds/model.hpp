#pragma once

// Core IMDS types: servers with values and services, agents, the action
// relation over (message, state) pairs, and single-step execution.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "imds/error.hpp"

namespace imds {

/// p = (s, v): server index and value index within that server.
struct ServerState {
    std::size_t server = 0;
    std::size_t value = 0;

    friend bool operator==(const ServerState&, const ServerState&) = default;
    friend bool operator<(const ServerState& a, const ServerState& b) {
        return std::tie(a.server, a.value) < std::tie(b.server, b.value);
    }
};

/// m = (a, s, r): agent, server and service index within that server.
struct Message {
    std::size_t agent = 0;
    std::size_t server = 0;
    std::size_t service = 0;

    friend bool operator==(const Message&, const Message&) = default;
    friend bool operator<(const Message& a, const Message& b) {
        return std::tie(a.agent, a.server, a.service) < std::tie(b.agent, b.server, b.service);
    }
};

/// (m, p) -> (m', p'), or (m, p) -> (p') when the action terminates its agent.
struct Action {
    Message in_message;
    ServerState in_state;
    std::optional<Message> out_message;
    ServerState out_state;
    /// Optional user label from the source (`A: {..} -> {..}`); empty if none.
    std::string name;

    bool terminating() const noexcept { return !out_message.has_value(); }

    friend bool operator==(const Action&, const Action&) = default;
};

struct Server {
    std::string name;
    std::vector<std::string> values;
    std::vector<std::string> services;

    friend bool operator==(const Server&, const Server&) = default;
};

struct SystemModel {
    /// Informational only; not part of model identity.
    std::string name;
    std::vector<Server> servers;
    std::vector<std::string> agents;
    std::vector<Action> actions;
    /// Initial value per server (index into that server's values).
    std::vector<std::optional<std::size_t>> initial_value;
    /// Initial message per agent.
    std::vector<std::optional<Message>> initial_message;

    friend bool operator==(const SystemModel& a, const SystemModel& b) {
        return a.servers == b.servers && a.agents == b.agents && a.actions == b.actions &&
               a.initial_value == b.initial_value && a.initial_message == b.initial_message;
    }

    std::optional<std::size_t> find_server(std::string_view n) const {
        for (std::size_t i = 0; i < servers.size(); ++i)
            if (servers[i].name == n) return i;
        return std::nullopt;
    }
    std::optional<std::size_t> find_agent(std::string_view n) const {
        for (std::size_t i = 0; i < agents.size(); ++i)
            if (agents[i] == n) return i;
        return std::nullopt;
    }
};

/// One state per server plus the pending message of every live agent.
struct Configuration {
    std::vector<std::uint32_t> values;
    std::vector<std::optional<Message>> messages;

    friend bool operator==(const Configuration&, const Configuration&) = default;

    std::size_t pending() const {
        return static_cast<std::size_t>(
            std::count_if(messages.begin(), messages.end(), [](const auto& m) { return m.has_value(); }));
    }
};

struct Diagnostic {
    std::string message;
    /// Offending action index, when the problem is local to one action.
    std::optional<std::size_t> action;
};

// ---------------------------------------------------------------------------
// Text forms

inline bool is_identifier(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

inline std::string state_text(const SystemModel& m, const ServerState& p) {
    const auto& srv = m.servers.at(p.server);
    return srv.name + "." + srv.values.at(p.value);
}

inline std::string message_text(const SystemModel& m, const Message& msg) {
    const auto& srv = m.servers.at(msg.server);
    return m.agents.at(msg.agent) + "." + srv.name + "." + srv.services.at(msg.service);
}

/// Source form of an action: `{a.s.r, s.v} -> {a.s'.r', s.v'}`.
inline std::string action_text(const SystemModel& m, const Action& a) {
    std::string out = "{" + message_text(m, a.in_message) + ", " + state_text(m, a.in_state) + "} -> {";
    if (a.out_message) out += message_text(m, *a.out_message) + ", ";
    out += state_text(m, a.out_state) + "}";
    return out;
}

/// Unique, whitespace-free label used in traces, DOT edges and the service.
/// The user name wins when present.
inline std::string action_label(const SystemModel& m, std::size_t id) {
    const Action& a = m.actions.at(id);
    if (!a.name.empty()) return a.name;
    std::string out = message_text(m, a.in_message) + "," + state_text(m, a.in_state) + "->";
    if (a.out_message) out += message_text(m, *a.out_message) + ",";
    return out + state_text(m, a.out_state);
}

/// Resolves a label, `#<index>`, or the spaced source form to an action id.
inline std::optional<std::size_t> find_action(const SystemModel& m, std::string_view label) {
    if (label.size() > 1 && label.front() == '#') {
        std::size_t id = 0;
        for (char c : label.substr(1)) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            id = id * 10 + static_cast<std::size_t>(c - '0');
        }
        if (id < m.actions.size()) return id;
        return std::nullopt;
    }
    for (std::size_t i = 0; i < m.actions.size(); ++i)
        if (action_label(m, i) == label || action_text(m, m.actions[i]) == label) return i;
    return std::nullopt;
}

/// `agents: a1:srv.svc, a2:-; servers: s1.v1, s2.v2`, declaration order.
inline std::string configuration_text(const SystemModel& m, const Configuration& c) {
    std::string out = "agents: ";
    for (std::size_t a = 0; a < c.messages.size(); ++a) {
        if (a) out += ", ";
        out += m.agents.at(a) + ":";
        if (const auto& msg = c.messages[a]) {
            const auto& srv = m.servers.at(msg->server);
            out += srv.name + "." + srv.services.at(msg->service);
        } else {
            out += "-";
        }
    }
    out += "; servers: ";
    for (std::size_t s = 0; s < c.values.size(); ++s) {
        if (s) out += ", ";
        out += state_text(m, {s, c.values[s]});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline bool message_in_range(const SystemModel& m, const Message& msg) {
    return msg.agent < m.agents.size() && msg.server < m.servers.size() &&
           msg.service < m.servers[msg.server].services.size();
}

inline bool state_in_range(const SystemModel& m, const ServerState& p) {
    return p.server < m.servers.size() && p.value < m.servers[p.server].values.size();
}

template <class Names>
void check_names(const Names& names, const std::string& what, std::vector<Diagnostic>& out) {
    std::set<std::string> seen;
    for (const std::string& n : names) {
        if (!is_identifier(n)) out.push_back({"invalid " + what + " name '" + n + "'", std::nullopt});
        if (!seen.insert(n).second) out.push_back({"duplicate " + what + " name '" + n + "'", std::nullopt});
    }
}

inline auto action_key(const Action& a) {
    const bool term = a.terminating();
    const Message out = a.out_message.value_or(Message{});
    return std::make_tuple(a.in_state.server, a.in_state.value, a.in_message.agent, a.in_message.server,
                           a.in_message.service, !term, out.agent, out.server, out.service,
                           a.out_state.server, a.out_state.value);
}

} // namespace detail

/// Every violated invariant; the model is valid iff the result is empty.
inline std::vector<Diagnostic> validate_model(const SystemModel& m) {
    std::vector<Diagnostic> out;

    std::vector<std::string> server_names;
    for (const auto& s : m.servers) server_names.push_back(s.name);
    detail::check_names(server_names, "server", out);
    detail::check_names(m.agents, "agent", out);
    for (const auto& s : m.servers) {
        detail::check_names(s.values, "state of server " + s.name + ":", out);
        detail::check_names(s.services, "service of server " + s.name + ":", out);
        if (s.values.empty()) out.push_back({"server " + s.name + " has no states", std::nullopt});
    }

    std::set<std::string> names;
    for (std::size_t i = 0; i < m.actions.size(); ++i) {
        const Action& a = m.actions[i];
        if (!detail::message_in_range(m, a.in_message) || !detail::state_in_range(m, a.in_state) ||
            !detail::state_in_range(m, a.out_state) ||
            (a.out_message && !detail::message_in_range(m, *a.out_message))) {
            out.push_back({"action refers to an undeclared server, agent, service or state", i});
            continue;
        }
        if (a.in_message.server != a.in_state.server)
            out.push_back({"message server differs from state server in " + action_text(m, a), i});
        if (a.out_state.server != a.in_state.server)
            out.push_back({"output state server differs from input state server in " + action_text(m, a), i});
        if (a.out_message && a.out_message->agent != a.in_message.agent)
            out.push_back({"output message agent differs from input message agent in " + action_text(m, a), i});
        if (!a.name.empty()) {
            if (!is_identifier(a.name)) out.push_back({"invalid action name '" + a.name + "'", i});
            if (!names.insert(a.name).second) out.push_back({"duplicate action name '" + a.name + "'", i});
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (detail::action_key(m.actions[j]) == detail::action_key(a)) {
                out.push_back({"duplicate action " + action_text(m, a), i});
                break;
            }
        }
    }

    if (m.initial_value.size() != m.servers.size()) {
        out.push_back({"initial state table does not match the server list", std::nullopt});
    } else {
        for (std::size_t s = 0; s < m.servers.size(); ++s) {
            if (!m.initial_value[s])
                out.push_back({"server without initial state: " + m.servers[s].name, std::nullopt});
            else if (*m.initial_value[s] >= m.servers[s].values.size())
                out.push_back({"initial state out of range for server " + m.servers[s].name, std::nullopt});
        }
    }
    if (m.initial_message.size() != m.agents.size()) {
        out.push_back({"initial message table does not match the agent list", std::nullopt});
    } else {
        for (std::size_t a = 0; a < m.agents.size(); ++a) {
            const auto& msg = m.initial_message[a];
            if (!msg)
                out.push_back({"agent without initial message: " + m.agents[a], std::nullopt});
            else if (!detail::message_in_range(m, *msg))
                out.push_back({"initial message of " + m.agents[a] + " is undeclared", std::nullopt});
            else if (msg->agent != a)
                out.push_back({"initial message of " + m.agents[a] + " belongs to another agent", std::nullopt});
        }
    }
    return out;
}

/// Orders actions by (state server, state value, agent, service, outputs).
/// The order is independent of which view the model was written in.
inline void sort_actions(SystemModel& m) {
    std::stable_sort(m.actions.begin(), m.actions.end(), [](const Action& a, const Action& b) {
        return detail::action_key(a) < detail::action_key(b);
    });
}

// ---------------------------------------------------------------------------
// Semantics

inline Configuration initial_configuration(const SystemModel& m) {
    Configuration c;
    c.values.reserve(m.servers.size());
    for (const auto& v : m.initial_value) c.values.push_back(static_cast<std::uint32_t>(v.value_or(0)));
    c.messages = m.initial_message;
    return c;
}

inline bool is_enabled(const Configuration& c, const Action& a) {
    const auto& pending = c.messages[a.in_message.agent];
    return pending && *pending == a.in_message && c.values[a.in_state.server] == a.in_state.value;
}

/// Ids of the actions enabled at `c`, ascending.
inline std::vector<std::size_t> enabled_actions(const SystemModel& m, const Configuration& c) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m.actions.size(); ++i)
        if (is_enabled(c, m.actions[i])) out.push_back(i);
    return out;
}

inline Configuration apply_action(const SystemModel& m, const Configuration& c, std::size_t id) {
    const Action& a = m.actions.at(id);
    if (!is_enabled(c, a)) throw ActionNotEnabled(id);
    Configuration next = c;
    next.values[a.out_state.server] = static_cast<std::uint32_t>(a.out_state.value);
    next.messages[a.in_message.agent] = a.out_message;
    return next;
}

} // namespace imds

template <>
struct std::hash<imds::Configuration> {
    std::size_t operator()(const imds::Configuration& c) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        auto mix = [&h](std::size_t v) { h = (h ^ v) * 0x100000001b3ull; };
        for (auto v : c.values) mix(v);
        for (const auto& m : c.messages) {
            if (m) {
                mix(m->server + 1);
                mix(m->service);
            } else {
                mix(0);
            }
        }
        return h;
    }
};
