#pragma once

// Seeded generator of small valid models: at most 3 servers, 3 agents and
// 10 actions. Names are s<i>, v<j>, r<k>, a<i> so every model also renders.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "imds/model.hpp"
#include "oracle.hpp"

namespace testing_support {

inline imds::SystemModel random_model(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&rng](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    imds::SystemModel m;
    m.name = "random_" + std::to_string(seed);
    const std::size_t servers = pick(1, 3), agents = pick(1, 3);
    for (std::size_t s = 0; s < servers; ++s) {
        imds::Server srv;
        srv.name = "s" + std::to_string(s);
        for (std::size_t v = 0, n = pick(2, 3); v < n; ++v) srv.values.push_back("v" + std::to_string(v));
        for (std::size_t r = 0, n = pick(1, 2); r < n; ++r) srv.services.push_back("r" + std::to_string(r));
        m.servers.push_back(std::move(srv));
        m.initial_value.emplace_back(pick(0, m.servers.back().values.size() - 1));
    }
    auto random_message = [&](std::size_t agent) {
        const std::size_t s = pick(0, servers - 1);
        return imds::Message{agent, s, pick(0, m.servers[s].services.size() - 1)};
    };
    for (std::size_t a = 0; a < agents; ++a) {
        m.agents.push_back("a" + std::to_string(a));
        m.initial_message.emplace_back(random_message(a));
    }

    // Bias inputs towards messages already in play so that actions fire.
    std::vector<imds::Message> known;
    for (const auto& msg : m.initial_message) known.push_back(*msg);
    std::set<std::tuple<imds::Message, imds::ServerState>> inputs;
    const std::size_t count = pick(1, 10);
    for (std::size_t tries = 0; m.actions.size() < count && tries < 100; ++tries) {
        imds::Action act;
        act.in_message = pick(0, 3) ? known[pick(0, known.size() - 1)] : random_message(pick(0, agents - 1));
        const std::size_t s = act.in_message.server;
        act.in_state = {s, pick(0, m.servers[s].values.size() - 1)};
        act.out_state = {s, pick(0, m.servers[s].values.size() - 1)};
        if (pick(0, 4) != 0) {
            act.out_message = random_message(act.in_message.agent);
            known.push_back(*act.out_message);
        }
        // Occasionally a second action on the same input pair (nondeterminism).
        if (!inputs.insert({act.in_message, act.in_state}).second && pick(0, 2) != 0) continue;
        bool duplicate = false;
        for (const auto& other : m.actions)
            duplicate = duplicate || (other.in_message == act.in_message && other.in_state == act.in_state &&
                                      other.out_message == act.out_message && other.out_state == act.out_state);
        if (!duplicate) m.actions.push_back(act);
    }
    imds::sort_actions(m);
    return m;
}

/// Same model in the oracle's string form.
inline oracle::RawSystem to_raw(const imds::SystemModel& m) {
    oracle::RawSystem r;
    for (std::size_t s = 0; s < m.servers.size(); ++s) {
        r.values[m.servers[s].name] = m.servers[s].values;
        r.initial_value[m.servers[s].name] = m.servers[s].values[*m.initial_value[s]];
    }
    r.agents = m.agents;
    for (std::size_t a = 0; a < m.agents.size(); ++a) {
        const auto& msg = *m.initial_message[a];
        r.initial_message[m.agents[a]] = {m.servers[msg.server].name, m.servers[msg.server].services[msg.service]};
    }
    for (const auto& act : m.actions) {
        const auto& srv = m.servers[act.in_state.server];
        oracle::RawAction ra{m.agents[act.in_message.agent], srv.name, srv.services[act.in_message.service],
                             srv.values[act.in_state.value], "", "", srv.values[act.out_state.value]};
        if (act.out_message) {
            ra.out_server = m.servers[act.out_message->server].name;
            ra.out_service = m.servers[act.out_message->server].services[act.out_message->service];
        }
        r.actions.push_back(ra);
    }
    return r;
}

} // namespace testing_support
