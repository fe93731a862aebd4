#pragma once

// Server processes and agent processes: the two ways of cutting one
// uniform action set.

#include <algorithm>
#include <string>
#include <vector>

#include "imds/model.hpp"

namespace imds {

enum class ProcessKind { server, agent };

struct ProcessBlock {
    std::string owner;
    std::vector<std::size_t> actions;
    /// Server blocks: state texts. Agent blocks: message texts.
    std::vector<std::string> carriers;
};

struct ProcessPartition {
    ProcessKind kind = ProcessKind::server;
    std::vector<ProcessBlock> blocks;
};

inline ProcessPartition server_processes(const SystemModel& m) {
    ProcessPartition p{ProcessKind::server, {}};
    for (std::size_t s = 0; s < m.servers.size(); ++s) {
        ProcessBlock b{m.servers[s].name, {}, {}};
        for (std::size_t v = 0; v < m.servers[s].values.size(); ++v) b.carriers.push_back(state_text(m, {s, v}));
        for (std::size_t i = 0; i < m.actions.size(); ++i)
            if (m.actions[i].in_state.server == s) b.actions.push_back(i);
        p.blocks.push_back(std::move(b));
    }
    return p;
}

/// Messages an agent can ever carry: its initial message first, then first
/// appearance in action order (input before output).
inline std::vector<Message> agent_messages(const SystemModel& m, std::size_t agent) {
    std::vector<Message> out;
    auto add = [&](const Message& msg) {
        if (msg.agent == agent && std::find(out.begin(), out.end(), msg) == out.end()) out.push_back(msg);
    };
    if (agent < m.initial_message.size() && m.initial_message[agent]) add(*m.initial_message[agent]);
    for (const Action& a : m.actions) {
        add(a.in_message);
        if (a.out_message) add(*a.out_message);
    }
    return out;
}

inline ProcessPartition agent_processes(const SystemModel& m) {
    ProcessPartition p{ProcessKind::agent, {}};
    for (std::size_t a = 0; a < m.agents.size(); ++a) {
        ProcessBlock b{m.agents[a], {}, {}};
        for (const Message& msg : agent_messages(m, a)) b.carriers.push_back(message_text(m, msg));
        for (std::size_t i = 0; i < m.actions.size(); ++i)
            if (m.actions[i].in_message.agent == a) b.actions.push_back(i);
        p.blocks.push_back(std::move(b));
    }
    return p;
}

} // namespace imds
