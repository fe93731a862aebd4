#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "imds/imds.hpp"
#include "support/corpus.hpp"
#include "support/oracle.hpp"
#include "support/random_model.hpp"

using namespace imds;
using testing_support::load_corpus;

namespace {

SystemModel buffer() { return load_corpus("buffer").model; }
SystemModel crossed() { return load_corpus("crossed").model; }

std::size_t act(const SystemModel& m, const std::string& label) {
    auto id = find_action(m, label);
    EXPECT_TRUE(id.has_value()) << label;
    return id.value_or(0);
}

ParseErrorKind parse_error_kind(const std::string& src) {
    try {
        parse(src);
    } catch (const ParseError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no parse error for:\n" << src;
    return ParseErrorKind::syntax;
}

oracle::Point to_point(const SystemModel& m, const Configuration& c) {
    oracle::Point p;
    for (std::size_t a = 0; a < m.agents.size(); ++a)
        p.messages[m.agents[a]] = c.messages[a] ? m.servers[c.messages[a]->server].name + "." +
                                                      m.servers[c.messages[a]->server].services[c.messages[a]->service]
                                                : "";
    for (std::size_t s = 0; s < m.servers.size(); ++s) p.values[m.servers[s].name] = m.servers[s].values[c.values[s]];
    return p;
}

const std::string tiny = R"(
system tiny;
server: s (agents a), services {r}, states {v0, v1},
  actions { {a.s.r, s.v0} -> {s.v1}, };
servers s;
agents a;
init -> { s(a).v0, a.s.r, }.
)";

} // namespace

// ---------------------------------------------------------------------------
// Parser

TEST(Parser, BufferServerViewShape) {
    const ParseResult r = load_corpus("buffer");
    EXPECT_EQ(r.view, View::server);
    EXPECT_EQ(r.model.servers.size(), 3u);
    EXPECT_EQ(r.model.agents.size(), 2u);
    EXPECT_EQ(r.model.actions.size(), 6u);
    EXPECT_EQ(r.model.servers[0].name, "buf");
    EXPECT_EQ(r.model.servers[0].values, (std::vector<std::string>{"no_elem", "elem"}));
}

TEST(Parser, BufferAgentViewShape) {
    const ParseResult r = load_corpus("buffer", View::agent);
    EXPECT_EQ(r.view, View::agent);
    EXPECT_EQ(r.model.servers.size(), 3u);
    EXPECT_EQ(r.model.agents.size(), 2u);
    EXPECT_EQ(r.model.actions.size(), 6u);
}

TEST(Parser, ViewsGiveEqualModels) {
    for (const auto& name : testing_support::corpus_names()) {
        SCOPED_TRACE(name);
        EXPECT_EQ(load_corpus(name).model, load_corpus(name, View::agent).model);
    }
}

TEST(Parser, RenderRoundTripsBothWays) {
    for (const auto& name : testing_support::corpus_names()) {
        SCOPED_TRACE(name);
        const SystemModel m = load_corpus(name).model;
        for (View v : {View::server, View::agent}) {
            const ParseResult back = parse(render(m, v));
            EXPECT_EQ(back.view, v);
            EXPECT_EQ(back.model, m);
        }
    }
}

TEST(Parser, ActionLabelsAreKept) {
    const SystemModel m = crossed();
    ASSERT_EQ(m.actions.size(), 4u);
    // Canonical order sorts by state server first.
    EXPECT_EQ(action_label(m, 0), "A");
    EXPECT_EQ(action_label(m, 1), "D");
    EXPECT_EQ(action_label(m, 2), "B");
    EXPECT_EQ(action_label(m, 3), "C");
    EXPECT_TRUE(m.actions[1].terminating());
}

TEST(Parser, UnlabelledActionsGetCompactLabels) {
    const SystemModel m = buffer();
    EXPECT_EQ(action_label(m, 0), "Aprod.buf.put,buf.no_elem->Aprod.Sprod.ok_put,buf.elem");
    EXPECT_EQ(find_action(m, "#3"), 3u);
    EXPECT_EQ(find_action(m, action_label(m, 4)), 4u);
    EXPECT_FALSE(find_action(m, "nope").has_value());
}

TEST(Parser, UnknownIdentifierIsReported) {
    std::string src = tiny;
    src.replace(src.find("a.s.r, s.v0"), 11, "a.s.q, s.v0");
    EXPECT_EQ(parse_error_kind(src), ParseErrorKind::unknown_identifier);
}

TEST(Parser, SyntaxErrorCarriesPosition) {
    try {
        parse("system x;\nserver: s (agents a) services {r} states {v}\n  actions { {a.s.r s.v} -> {s.v} };");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseErrorKind::syntax);
        EXPECT_EQ(e.span().line, 3u);
    }
}

TEST(Parser, ArityMismatchIsReported) {
    std::string src = tiny;
    src.replace(src.find("s(a).v0"), 7, "s(a, a).v0");
    EXPECT_EQ(parse_error_kind(src), ParseErrorKind::arity_mismatch);
}

TEST(Parser, DuplicateNameIsReported) {
    std::string src = tiny;
    src.replace(src.find("servers s;"), 10, "servers s, s;");
    EXPECT_EQ(parse_error_kind(src), ParseErrorKind::duplicate_name);
}

TEST(Parser, MessageToOtherServerStateIsAConstraintViolation) {
    const std::string src = R"(
system bad;
server: s (agents a; servers t), services {r}, states {v0},
  actions { {a.t.r, s.v0} -> {s.v0}, };
server: t (agents a), services {r}, states {w},
  actions { };
servers s, t;
agents a;
init -> { s(a, t).v0, t(a).w, a.s.r, }.
)";
    EXPECT_EQ(parse_error_kind(src), ParseErrorKind::constraint_violation);
}

TEST(Parser, MissingInitialStateIsAConstraintViolation) {
    std::string src = tiny;
    src.replace(src.find("s(a).v0,"), 8, "");
    EXPECT_EQ(parse_error_kind(src), ParseErrorKind::constraint_violation);
}

TEST(Parser, RandomModelsRoundTrip) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const SystemModel m = testing_support::random_model(seed);
        ASSERT_TRUE(validate_model(m).empty()) << seed;
        for (View v : {View::server, View::agent}) EXPECT_EQ(parse(render(m, v)).model, m) << seed;
    }
}

// ---------------------------------------------------------------------------
// Model semantics

TEST(Model, InitialConfiguration) {
    const SystemModel m = buffer();
    const Configuration c = initial_configuration(m);
    EXPECT_EQ(c.pending(), 2u);
    EXPECT_EQ(configuration_text(m, c), "agents: Aprod:Sprod.doSth, Acons:Scons.doSth; servers: buf.no_elem, Sprod.neutral, Scons.neutral");
}

TEST(Model, ApplyRejectsDisabledAction) {
    const SystemModel m = buffer();
    EXPECT_THROW(apply_action(m, initial_configuration(m), act(m, "#0")), ActionNotEnabled);
}

TEST(Model, TerminatingActionRemovesMessage) {
    const SystemModel m = parse(tiny).model;
    const Configuration c = apply_action(m, initial_configuration(m), 0);
    EXPECT_EQ(c.pending(), 0u);
    EXPECT_EQ(c.values[0], 1u);
}

// ---------------------------------------------------------------------------
// LTS, checked against the string-based product enumerator

TEST(Lts, BufferMatchesOracle) {
    const SystemModel m = buffer();
    const Lts lts = build_lts(m);
    const oracle::Result o = oracle::explore(oracle::buffer_system());
    EXPECT_EQ(o.reachable.size(), 18u);
    EXPECT_EQ(o.edges, 30u);
    EXPECT_EQ(lts.node_count(), o.reachable.size());
    EXPECT_EQ(lts.edge_count(), o.edges);
    std::set<oracle::Point> mine;
    for (const auto& c : lts.nodes) mine.insert(to_point(m, c));
    EXPECT_EQ(mine, o.reachable);
}

TEST(Lts, CrossedMatchesOracle) {
    const SystemModel m = crossed();
    const Lts lts = build_lts(m);
    const oracle::Result o = oracle::explore(oracle::crossed_system());
    EXPECT_EQ(o.reachable.size(), 6u);
    EXPECT_EQ(o.edges, 6u);
    EXPECT_EQ(o.dead, 3u);
    EXPECT_EQ(lts.node_count(), 6u);
    EXPECT_EQ(lts.edge_count(), 6u);
    std::size_t dead = 0;
    for (std::size_t n = 0; n < lts.node_count(); ++n) dead += is_dead_end(lts, n);
    EXPECT_EQ(dead, 3u);
}

TEST(Lts, NumberingIsBfsWithAscendingActions) {
    const SystemModel m = crossed();
    const Lts lts = build_lts(m);
    // T0 -A-> T1, T0 -C-> T2, T1 -B-> T3, T1 -C-> T4, T2 -A-> T4, T2 -D-> T5
    const std::vector<Edge> expected{{0, act(m, "A"), 1}, {0, act(m, "C"), 2}, {1, act(m, "B"), 3},
                                     {1, act(m, "C"), 4}, {2, act(m, "A"), 4}, {2, act(m, "D"), 5}};
    EXPECT_EQ(lts.edges, expected);
}

TEST(Lts, RandomModelsMatchOracle) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const SystemModel m = testing_support::random_model(seed);
        const Lts lts = build_lts(m);
        const oracle::Result o = oracle::explore(testing_support::to_raw(m));
        ASSERT_EQ(lts.node_count(), o.reachable.size()) << seed;
        ASSERT_EQ(lts.edge_count(), o.edges) << seed;
    }
}

TEST(Lts, LimitExceededCarriesCounts) {
    Limits l;
    l.max_nodes = 5;
    try {
        build_lts(buffer(), l);
        FAIL();
    } catch (const LimitExceeded& e) {
        EXPECT_EQ(e.nodes(), 6u);
    }
}

TEST(Lts, NoInitialActionGivesSingleNode) {
    std::string src = tiny;
    src.replace(src.find("s(a).v0"), 7, "s(a).v1");
    const Lts lts = build_lts(parse(src).model);
    EXPECT_EQ(lts.node_count(), 1u);
    EXPECT_EQ(lts.edge_count(), 0u);
}

TEST(Lts, BufferIsStronglyConnected) {
    std::size_t count = 0;
    strongly_connected_components(build_lts(buffer()), &count);
    EXPECT_EQ(count, 1u);
}

TEST(Lts, DumpIsDeterministic) {
    const SystemModel m = buffer();
    EXPECT_EQ(lts_dump(m, build_lts(m)), lts_dump(m, build_lts(m)));
    EXPECT_EQ(lts_dot(m, build_lts(m)), lts_dot(m, build_lts(m)));
}

// ---------------------------------------------------------------------------
// Analysis

TEST(Analysis, CrossedTotalDeadlock) {
    const SystemModel m = crossed();
    const Lts lts = build_lts(m);
    const Verdict v = detect_total_deadlock(lts);
    ASSERT_TRUE(v.holds);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->length(), 2u);
    EXPECT_EQ(v.witness->labels, (std::vector<std::size_t>{act(m, "A"), act(m, "C")}));
    const Configuration& last = lts.nodes[v.witness->nodes.back()];
    EXPECT_EQ(configuration_text(m, last), "agents: a1:sem2.p, a2:sem1.p; servers: sem1.down, sem2.down");
}

TEST(Analysis, BufferHasNoDeadlockOrTermination) {
    const SystemModel m = buffer();
    const Lts lts = build_lts(m);
    const Report r = analyze(lts, m);
    EXPECT_FALSE(r.any_deadlock());
    EXPECT_FALSE(r.termination.total.can);
    for (const auto& t : r.termination.agents) EXPECT_FALSE(t.can);
    EXPECT_TRUE(r.dead.empty());
}

TEST(Analysis, SingleTerminatingActionIsNotADeadlock) {
    const SystemModel m = parse(tiny).model;
    const Report r = analyze(build_lts(m), m);
    EXPECT_FALSE(r.any_deadlock());
    EXPECT_TRUE(r.termination.total.can);
    EXPECT_TRUE(r.termination.total.must);
}

TEST(Analysis, CrossedPartialDeadlocks) {
    const SystemModel m = crossed();
    const Lts lts = build_lts(m);
    const auto agents = detect_partial_deadlock_agents(lts, m);
    ASSERT_EQ(agents.size(), 2u);
    EXPECT_TRUE(agents[0].holds);
    EXPECT_TRUE(agents[1].holds);
    // a2 is stuck at T3 (a1 gone, sem2 down).
    EXPECT_EQ(configuration_text(m, lts.nodes[agents[1].witness->nodes.back()]),
              "agents: a1:-, a2:sem2.p; servers: sem1.down, sem2.down");
    const auto servers = detect_partial_deadlock_servers(lts, m);
    EXPECT_TRUE(servers[0].holds);
    EXPECT_TRUE(servers[1].holds);
}

TEST(Analysis, BufferHasNoPartialDeadlock) {
    const SystemModel m = buffer();
    const Lts lts = build_lts(m);
    for (const auto& v : detect_partial_deadlock_agents(lts, m)) EXPECT_FALSE(v.holds);
    for (const auto& v : detect_partial_deadlock_servers(lts, m)) EXPECT_FALSE(v.holds);
}

TEST(Analysis, CrossedTermination) {
    const SystemModel m = crossed();
    const TerminationReport t = detect_termination(build_lts(m), m);
    EXPECT_TRUE(t.agents[0].can);
    EXPECT_FALSE(t.agents[0].must);
    EXPECT_EQ(t.agents[0].witness->labels, (std::vector<std::size_t>{act(m, "A"), act(m, "B")}));
    EXPECT_TRUE(t.agents[1].can);
    EXPECT_FALSE(t.agents[1].must);
    EXPECT_FALSE(t.total.can);
    EXPECT_FALSE(t.total.must);
}

TEST(Analysis, RelayMixesTerminationAndStuckAgent) {
    const SystemModel m = load_corpus("relay").model;
    const Lts lts = build_lts(m);
    const Report r = analyze(lts, m);
    EXPECT_TRUE(r.find("agent-termination:a")->holds);
    EXPECT_TRUE(r.find("partial-deadlock-agent:b")->holds);
    EXPECT_TRUE(r.find("total-termination")->holds);
    EXPECT_FALSE(r.termination.total.must);
}

TEST(Analysis, DeadActionsMatchOracle) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const SystemModel m = testing_support::random_model(seed);
        const oracle::RawSystem raw = testing_support::to_raw(m);
        const oracle::Result o = oracle::explore(raw);
        const Report r = analyze(build_lts(m), m);
        std::size_t oracle_dead = 0;
        for (const auto& a : raw.actions)
            oracle_dead += !o.fired.count(a.agent + "." + a.server + "." + a.service + "@" + a.value + "->" +
                                          a.out_server + "." + a.out_service + "@" + a.out_value);
        EXPECT_EQ(r.dead.size(), oracle_dead) << seed;
        EXPECT_EQ(detect_total_deadlock(build_lts(m)).holds, o.deadlocked > 0) << seed;
        EXPECT_EQ(r.termination.total.can, o.all_terminated > 0) << seed;
    }
}

TEST(Analysis, WitnessesReplayToTheirPredicate) {
    for (const auto& name : testing_support::corpus_names()) {
        const SystemModel m = load_corpus(name).model;
        const Lts lts = build_lts(m);
        const Report r = analyze(lts, m);
        for (const Verdict& v : r.verdicts) {
            EXPECT_EQ(v.witness.has_value(), v.holds && v.kind != VerdictKind::dead_action) << name << " " << v.id();
            if (!v.witness) continue;
            Configuration c = initial_configuration(m);
            for (std::size_t a : v.witness->labels) c = apply_action(m, c, a);
            EXPECT_EQ(c, lts.nodes[v.witness->nodes.back()]);
            if (v.kind == VerdictKind::total_deadlock) {
                EXPECT_GT(c.pending(), 0u);
                EXPECT_TRUE(enabled_actions(m, c).empty());
            }
        }
    }
}

TEST(Analysis, AgentPartialDeadlockIsMonotone) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const SystemModel m = testing_support::random_model(seed);
        const Lts lts = build_lts(m);
        const auto verdicts = detect_partial_deadlock_agents(lts, m);
        for (std::size_t a = 0; a < m.agents.size(); ++a) {
            if (!verdicts[a].holds) continue;
            // From the witness end, a never acts again on any path.
            std::vector<bool> seen(lts.node_count(), false);
            std::vector<std::size_t> stack{verdicts[a].witness->nodes.back()};
            while (!stack.empty()) {
                const std::size_t n = stack.back();
                stack.pop_back();
                if (seen[n]) continue;
                seen[n] = true;
                EXPECT_TRUE(lts.nodes[n].messages[a].has_value()) << seed;
                for (const Edge& e : lts.out(n)) {
                    EXPECT_NE(m.actions[e.label].in_message.agent, a) << seed;
                    stack.push_back(e.target);
                }
            }
        }
    }
}

TEST(Analysis, ReportTextMentionsCounterexample) {
    const SystemModel m = crossed();
    const Lts lts = build_lts(m);
    const std::string text = report_text(m, lts, analyze(lts, m));
    EXPECT_NE(text.find("total-deadlock: HOLDS (witness length 2)"), std::string::npos);
    EXPECT_NE(text.find("counterexample total-deadlock"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Views

TEST(Views, PartitionsCoverEveryActionOnce) {
    for (const auto& name : testing_support::corpus_names()) {
        const SystemModel m = load_corpus(name).model;
        for (const auto& part : {server_processes(m), agent_processes(m)}) {
            std::vector<std::size_t> all;
            for (const auto& b : part.blocks) all.insert(all.end(), b.actions.begin(), b.actions.end());
            std::sort(all.begin(), all.end());
            std::vector<std::size_t> expected(m.actions.size());
            for (std::size_t i = 0; i < expected.size(); ++i) expected[i] = i;
            EXPECT_EQ(all, expected) << name;
        }
    }
}

TEST(Views, AgentMessagesStartWithInitial) {
    const SystemModel m = buffer();
    const auto msgs = agent_messages(m, 0);
    ASSERT_EQ(msgs.size(), 3u);
    EXPECT_EQ(message_text(m, msgs[0]), "Aprod.Sprod.doSth");
}
