#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "imds/imds.hpp"
#include "support/andl_reader.hpp"
#include "support/corpus.hpp"
#include "support/random_model.hpp"

using namespace imds;
using testing_support::load_corpus;

namespace {

SystemModel buffer() { return load_corpus("buffer").model; }
SystemModel crossed() { return load_corpus("crossed").model; }

PlaceSet places(const PetriNet& net, std::initializer_list<const char*> names) {
    PlaceSet out;
    for (const char* n : names) out.push_back(*net.find_place(n));
    std::sort(out.begin(), out.end());
    return out;
}

bool contains(const std::vector<PlaceSet>& sets, const PlaceSet& s) {
    return std::find(sets.begin(), sets.end(), s) != sets.end();
}

std::vector<std::int64_t> weights(const PetriNet& net, std::initializer_list<const char*> names) {
    std::vector<std::int64_t> x(net.places.size(), 0);
    for (const char* n : names) x[*net.find_place(n)] = 1;
    return x;
}

bool subset_of(const PlaceSet& a, const PlaceSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

/// All siphons (or traps) by exhaustive enumeration, then the minimal ones.
std::vector<PlaceSet> brute_minimal(const PetriNet& net, bool siphon) {
    const std::size_t n = net.places.size();
    std::vector<PlaceSet> all;
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        PlaceSet d;
        for (std::size_t p = 0; p < n; ++p)
            if (mask >> p & 1) d.push_back(p);
        if (siphon ? is_siphon(net, d) : is_trap(net, d)) all.push_back(d);
    }
    std::vector<PlaceSet> minimal;
    for (const auto& d : all) {
        bool min = true;
        for (const auto& e : all) min = min && !(e.size() < d.size() && subset_of(e, d));
        if (min) minimal.push_back(d);
    }
    std::sort(minimal.begin(), minimal.end(), [](const PlaceSet& a, const PlaceSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return minimal;
}

} // namespace

// ---------------------------------------------------------------------------
// Petri nets

TEST(Petri, BufferNetShape) {
    const PetriNet net = to_petri(buffer());
    EXPECT_EQ(net.places.size(), 12u);
    EXPECT_EQ(net.transitions.size(), 6u);
    EXPECT_EQ(std::count_if(net.places.begin(), net.places.end(), [](const Place& p) { return p.kind == PlaceKind::state; }), 6);
    EXPECT_EQ(net.places[0].name, "S_buf_no_elem");
    EXPECT_EQ(std::accumulate(net.initial_marking.begin(), net.initial_marking.end(), 0u), 5u);
    for (std::size_t t = 0; t < 6; ++t) {
        EXPECT_EQ(net.inputs[t].size(), 2u);
        EXPECT_EQ(net.outputs[t].size(), 2u);
    }
}

TEST(Petri, CrossedNetShape) {
    const SystemModel m = crossed();
    const PetriNet net = to_petri(m);
    EXPECT_EQ(net.places.size(), 8u);
    ASSERT_EQ(net.transitions.size(), 4u);
    std::size_t single = 0;
    for (std::size_t t = 0; t < 4; ++t) {
        EXPECT_EQ(net.outputs[t].size(), m.actions[t].terminating() ? 1u : 2u);
        single += net.outputs[t].size() == 1;
    }
    EXPECT_EQ(single, 2u);
    EXPECT_TRUE(net.find_place("M_a1_sem2_p").has_value());
    EXPECT_TRUE(net.find_place("M_a2_sem1_p").has_value());
}

TEST(Petri, MarkingGraphsMatchLts) {
    for (const auto& name : testing_support::corpus_names()) {
        const SystemModel m = load_corpus(name).model;
        const PetriNet net = to_petri(m);
        const MarkingGraph mg = marking_graph(net);
        const Lts lts = build_lts(m);
        const IsoResult r = check_iso_with_lts(m, net, mg, lts);
        EXPECT_TRUE(r.ok) << name << ": " << r.mismatch;
    }
}

TEST(Petri, DroppedArcIsDetected) {
    const SystemModel m = buffer();
    PetriNet net = to_petri(m);
    net.outputs[0].pop_back();
    const IsoResult r = check_iso_with_lts(m, net, marking_graph(net), build_lts(m));
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.mismatch.empty());
}

TEST(Petri, EmptyInitialGivesOneMarking) {
    PetriNet net;
    net.places.push_back({"p", PlaceKind::state, ServerState{}});
    net.transitions.push_back({"t", 0});
    net.inputs.push_back({0});
    net.outputs.push_back({});
    net.initial_marking = {0};
    const MarkingGraph mg = marking_graph(net);
    EXPECT_EQ(mg.node_count(), 1u);
    EXPECT_EQ(mg.edge_count(), 0u);
}

TEST(Petri, TokenCountChangesOnlyOnTermination) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const SystemModel m = testing_support::random_model(seed);
        const PetriNet net = to_petri(m);
        const MarkingGraph mg = marking_graph(net);
        auto messages = [&](const Marking& mk) {
            std::uint32_t n = 0;
            for (std::size_t p = 0; p < mk.size(); ++p) n += net.places[p].kind == PlaceKind::message ? mk[p] : 0;
            return n;
        };
        for (const Edge& e : mg.edges) {
            const int delta = int(messages(mg.nodes[e.target])) - int(messages(mg.nodes[e.source]));
            EXPECT_EQ(delta, m.actions[e.label].terminating() ? -1 : 0) << seed;
        }
    }
}

TEST(Petri, BufferSiphonAndTrap) {
    const PetriNet net = to_petri(buffer());
    const PlaceSet buf = places(net, {"S_buf_no_elem", "S_buf_elem"});
    const auto siphons = minimal_siphons(net);
    const auto traps = minimal_traps(net);
    EXPECT_TRUE(contains(siphons, buf));
    EXPECT_TRUE(contains(traps, buf));
    EXPECT_FALSE(siphon_emptiable(buf, marking_graph(net)).has_value());
}

TEST(Petri, CrossedSiphonAndTrap) {
    const PetriNet net = to_petri(crossed());
    const PlaceSet up = places(net, {"S_sem1_up"});
    EXPECT_TRUE(contains(minimal_siphons(net), up));
    EXPECT_TRUE(contains(minimal_traps(net), places(net, {"S_sem1_down"})));
    const MarkingGraph mg = marking_graph(net);
    const auto w = siphon_emptiable(up, mg);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(mg.nodes[*w][up[0]], 0u);
}

TEST(Petri, NetWithoutTransitionsHasSingletonSiphons) {
    PetriNet net;
    for (const char* n : {"p", "q", "r"}) net.places.push_back({n, PlaceKind::state, ServerState{}});
    net.initial_marking = {1, 0, 0};
    const auto s = minimal_siphons(net);
    EXPECT_EQ(s, (std::vector<PlaceSet>{{0}, {1}, {2}}));
}

TEST(Petri, SiphonsAndTrapsMatchBruteForce) {
    std::vector<SystemModel> models{buffer(), crossed(), load_corpus("relay").model};
    for (std::uint64_t seed = 1; seed <= 40; ++seed) models.push_back(testing_support::random_model(seed));
    for (const SystemModel& m : models) {
        const PetriNet net = to_petri(m);
        if (net.places.size() > 16) continue;
        EXPECT_EQ(minimal_siphons(net), brute_minimal(net, true)) << m.name;
        EXPECT_EQ(minimal_traps(net), brute_minimal(net, false)) << m.name;
    }
}

TEST(Petri, SiphonBudgetIsEnforced) {
    const PetriNet net = to_petri(load_corpus("two_buffers").model);
    EXPECT_THROW(minimal_siphons(net, 10'000, 5), LimitExceeded);
}

TEST(Petri, BufferInvariants) {
    const PetriNet net = to_petri(buffer());
    const auto inv = p_invariants(net);
    const std::vector<std::vector<std::int64_t>> expected{
        weights(net, {"S_buf_no_elem", "S_buf_elem"}),
        weights(net, {"S_Sprod_neutral", "S_Sprod_prod"}),
        weights(net, {"S_Scons_neutral", "S_Scons_cons"}),
        weights(net, {"M_Aprod_Sprod_doSth", "M_Aprod_buf_put", "M_Aprod_Sprod_ok_put"}),
        weights(net, {"M_Acons_Scons_doSth", "M_Acons_buf_get", "M_Acons_Scons_ok_get"}),
    };
    for (const auto& x : expected) EXPECT_NE(std::find(inv.begin(), inv.end(), x), inv.end());
}

TEST(Petri, InvariantsAreConservedOnRandomNets) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const SystemModel m = testing_support::random_model(seed);
        const PetriNet net = to_petri(m);
        const MarkingGraph mg = marking_graph(net);
        const auto inc = incidence_matrix(net);
        for (const auto& x : p_invariants(net)) {
            EXPECT_TRUE(std::all_of(x.begin(), x.end(), [](auto v) { return v >= 0; }));
            for (std::size_t t = 0; t < net.transitions.size(); ++t) {
                std::int64_t sum = 0;
                for (std::size_t p = 0; p < x.size(); ++p) sum += x[p] * inc[p][t];
                EXPECT_EQ(sum, 0) << seed;
            }
            auto dot = [&](const Marking& mk) {
                std::int64_t s = 0;
                for (std::size_t p = 0; p < x.size(); ++p) s += x[p] * mk[p];
                return s;
            };
            for (const Marking& mk : mg.nodes) EXPECT_EQ(dot(mk), dot(net.initial_marking)) << seed;
        }
    }
}

TEST(Petri, SingleTransitionInvariant) {
    PetriNet net;
    net.places = {{"p1", PlaceKind::state, ServerState{}}, {"p2", PlaceKind::state, ServerState{}}};
    net.transitions = {{"t", 0}};
    net.inputs = {{0}};
    net.outputs = {{1}};
    net.initial_marking = {1, 0};
    EXPECT_EQ(p_invariants(net), (std::vector<std::vector<std::int64_t>>{{1, 1}}));
}

TEST(Petri, StructuralReports) {
    const PetriNet b = to_petri(buffer());
    const StructuralReport rb = structural_report(b, marking_graph(b));
    EXPECT_EQ(rb.components, 1u);
    EXPECT_TRUE(rb.dead_transitions.empty());
    EXPECT_TRUE(rb.safe);
    const PetriNet c = to_petri(crossed());
    const StructuralReport rc = structural_report(c, marking_graph(c));
    EXPECT_EQ(rc.components, 1u);
    EXPECT_TRUE(rc.dead_transitions.empty());
    const PetriNet two = to_petri(load_corpus("two_buffers").model);
    EXPECT_EQ(structural_report(two, marking_graph(two)).components, 2u);
}

TEST(Petri, AndlRoundTrip) {
    for (const auto& name : testing_support::corpus_names()) {
        const PetriNet net = to_petri(load_corpus(name).model);
        const std::string text = to_andl(net);
        EXPECT_EQ(text, to_andl(to_petri(load_corpus(name).model)));
        const auto back = testing_support::read_andl(text);
        ASSERT_EQ(back.places.size(), net.places.size());
        ASSERT_EQ(back.transitions.size(), net.transitions.size());
        for (std::size_t p = 0; p < net.places.size(); ++p) {
            EXPECT_EQ(back.places[p].first, net.places[p].name);
            EXPECT_EQ(back.places[p].second, net.initial_marking[p]);
        }
        for (std::size_t t = 0; t < net.transitions.size(); ++t) {
            std::vector<std::string> in, out;
            for (auto p : net.inputs[t]) in.push_back(net.places[p].name);
            for (auto p : net.outputs[t]) out.push_back(net.places[p].name);
            EXPECT_EQ(back.transitions[t].name, net.transitions[t].name);
            EXPECT_EQ(back.transitions[t].consume, in);
            EXPECT_EQ(back.transitions[t].produce, out);
        }
    }
}

TEST(Petri, AndlHeader) {
    const std::string text = to_andl(to_petri(crossed()));
    EXPECT_EQ(text.rfind("pn [crossed] {\nplaces:\n  discrete:\n    S_sem1_up = 1;\n", 0), 0u);
    EXPECT_NE(text.find("[S_sem1_up - 1] & [M_a1_sem1_p - 1]"), std::string::npos);
}

TEST(Petri, DotColoursPlaces) {
    const std::string dot = petri_dot(to_petri(crossed()));
    EXPECT_NE(dot.find("#f4b6b6"), std::string::npos);
    EXPECT_NE(dot.find("#b8e0b0"), std::string::npos);
    EXPECT_NE(dot.find("shape=box"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Automata

TEST(Automata, BufferServerAutomata) {
    const SystemModel m = buffer();
    const auto sda = to_sda3(m);
    ASSERT_EQ(sda.size(), 3u);
    EXPECT_EQ(sda[0].node_count, 2u);
    EXPECT_EQ(sda[0].transitions.size(), 2u);
    EXPECT_EQ(sda_label(m, sda[0].transitions[0]), "Aprod.buf.put/Aprod.Sprod.ok_put");
    EXPECT_TRUE(sda[0].initial_inputs.empty());
    ASSERT_EQ(sda[1].initial_inputs.size(), 1u);
    EXPECT_EQ(message_text(m, sda[1].initial_inputs[0]), "Aprod.Sprod.doSth");
    ASSERT_EQ(sda[2].initial_inputs.size(), 1u);
    EXPECT_EQ(message_text(m, sda[2].initial_inputs[0]), "Acons.Scons.doSth");
}

TEST(Automata, CrossedTerminatingServerTransition) {
    const SystemModel m = crossed();
    const auto sda = to_sda3(m);
    const auto& d = sda[0].transitions[1];
    EXPECT_FALSE(d.output.has_value());
    EXPECT_EQ(sda_label(m, d), "a2.sem1.p/—");
}

TEST(Automata, BufferAgentAutomata) {
    const SystemModel m = buffer();
    const auto ada = to_ada3(m);
    ASSERT_EQ(ada.size(), 2u);
    std::vector<std::string> labels;
    for (std::size_t n = 0; n < ada[0].nodes.size(); ++n) labels.push_back(ada_node_label(m, ada[0], n));
    EXPECT_EQ(labels, (std::vector<std::string>{"Sprod.doSth", "buf.put", "Sprod.ok_put"}));
    EXPECT_EQ(ada[0].transitions.size(), 3u);
    for (const auto& t : ada[0].transitions) EXPECT_NE(t.to, ada[0].terminal());
}

TEST(Automata, CrossedAgentAutomatonReachesTerminal) {
    const SystemModel m = crossed();
    const auto ada = to_ada3(m);
    EXPECT_EQ(ada[0].nodes.size(), 2u);
    bool found = false;
    for (const auto& t : ada[0].transitions)
        if (t.to == ada[0].terminal()) {
            found = true;
            EXPECT_EQ(ada_label(m, t), "sem2.up/sem2.down");
            EXPECT_EQ(ada_node_label(m, ada[0], t.from), "sem2.p");
        }
    EXPECT_TRUE(found);
}

TEST(Automata, GlobalGraphsMatchLts) {
    for (const auto& name : testing_support::corpus_names()) {
        const SystemModel m = load_corpus(name).model;
        const Lts lts = build_lts(m);
        const auto sda = to_sda3(m);
        const auto ada = to_ada3(m);
        const IsoResult s = check_iso_with_lts(m, sda, global_graph(sda), lts);
        const IsoResult a = check_iso_with_lts(m, ada, global_graph(ada, m), lts);
        EXPECT_TRUE(s.ok) << name << ": " << s.mismatch;
        EXPECT_TRUE(a.ok) << name << ": " << a.mismatch;
    }
}

TEST(Automata, CrossedAdaGraphDropsTerminatedAgents) {
    const SystemModel m = crossed();
    const auto ada = to_ada3(m);
    const AdaGraph g = global_graph(ada, m);
    EXPECT_EQ(g.node_count(), 6u);
    EXPECT_EQ(g.edge_count(), 6u);
    std::size_t with_terminated = 0;
    for (const auto& p : g.nodes) with_terminated += !p.nodes[0] || !p.nodes[1];
    EXPECT_EQ(with_terminated, 2u);
}

TEST(Automata, DroppedTransitionIsDetected) {
    const SystemModel m = crossed();
    const Lts lts = build_lts(m);
    auto sda = to_sda3(m);
    sda[1].transitions.pop_back();
    EXPECT_FALSE(check_iso_with_lts(m, sda, global_graph(sda), lts).ok);
    auto ada = to_ada3(m);
    ada[0].transitions.erase(ada[0].transitions.begin());
    EXPECT_FALSE(check_iso_with_lts(m, ada, global_graph(ada, m), lts).ok);
}

TEST(Automata, InputSetsStaySmall) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const SystemModel m = testing_support::random_model(seed);
        const auto sda = to_sda3(m);
        const SdaGraph g = global_graph(sda);
        for (const auto& p : g.nodes) {
            std::size_t total = 0;
            for (const auto& set : p.inputs) {
                EXPECT_LE(set.size(), m.agents.size());
                total += set.size();
            }
            EXPECT_LE(total, m.agents.size());
        }
    }
}

TEST(Automata, CommutingStepsReachTheSamePosition) {
    const SystemModel m = load_corpus("two_buffers").model;
    const auto sda = to_sda3(m);
    const SdaPosition p0 = initial_position(sda);
    const auto on = enabled_transitions(sda, p0);
    ASSERT_GE(on.size(), 2u);
    for (std::size_t i = 0; i < on.size(); ++i)
        for (std::size_t j = i + 1; j < on.size(); ++j) {
            if (on[i].automaton == on[j].automaton) continue;
            const SdaPosition a = fire(sda, fire(sda, p0, on[i]), on[j]);
            const SdaPosition b = fire(sda, fire(sda, p0, on[j]), on[i]);
            EXPECT_EQ(a, b);
        }
}

TEST(Automata, DotExport) {
    const SystemModel b = buffer();
    const auto files = export_dot(b, to_sda3(b));
    ASSERT_EQ(files.size(), 4u);
    EXPECT_EQ(files[0].name, "sda3_buf.dot");
    EXPECT_NE(files[0].text.find("label=\"no_elem\", style=bold"), std::string::npos);
    EXPECT_NE(files[0].text.find("label=\"elem\""), std::string::npos);
    EXPECT_EQ(files.back().name, "index.dot");
    // The buffer agents never terminate: t stays hidden unless asked for.
    const auto ada_files = export_dot(b, to_ada3(b));
    EXPECT_EQ(ada_files[0].text.find("\"t\""), std::string::npos);
    EXPECT_NE(export_dot(b, to_ada3(b), DotOptions{true})[0].text.find("\"t\""), std::string::npos);
    const SystemModel c = crossed();
    EXPECT_NE(export_dot(c, to_ada3(c))[0].text.find("label=\"t\""), std::string::npos);
    EXPECT_TRUE(export_dot(SystemModel{}, std::vector<ServerAutomaton>{}).empty());
}

// ---------------------------------------------------------------------------
// Simulator

namespace {

std::shared_ptr<const SystemModel> shared(const std::string& name) {
    return std::make_shared<const SystemModel>(load_corpus(name).model);
}

std::size_t act(const SystemModel& m, const char* label) { return *find_action(m, label); }

} // namespace

TEST(Simulator, BufferServerViewStart) {
    const auto m = shared("buffer");
    Session s = new_session(m, AutomataKind::sda3);
    EXPECT_EQ(s.sda_position.nodes, (std::vector<std::uint32_t>{0, 0, 0}));
    EXPECT_TRUE(s.sda_position.inputs[0].empty());
    const auto listed = listed_transitions(s);
    std::size_t buf_listed = 0;
    for (const auto& [lt, on] : listed) {
        if (lt.automaton == 0) {
            ++buf_listed;
            EXPECT_FALSE(on);
        }
    }
    EXPECT_EQ(buf_listed, 1u);  // only `put` leaves no_elem
    EXPECT_EQ(enabled(s).size(), 2u);
}

TEST(Simulator, BufferServerStepInsertsIntoDestination) {
    const auto m = shared("buffer");
    Session s = new_session(m, AutomataKind::sda3);
    const std::size_t do_sth = *find_action(*m, "{Aprod.Sprod.doSth, Sprod.neutral} -> {Aprod.buf.put, Sprod.prod}");
    const StepResult r = step(s, do_sth);
    EXPECT_EQ(r.focus, 0u);
    EXPECT_EQ(s.sda_position.nodes[1], 1u);
    ASSERT_EQ(s.sda_position.inputs[0].size(), 1u);
    EXPECT_EQ(message_text(*m, s.sda_position.inputs[0][0]), "Aprod.buf.put");
}

TEST(Simulator, CrossedAgentView) {
    const auto m = shared("crossed");
    Session s = new_session(m, AutomataKind::ada3);
    EXPECT_EQ(enabled(s), (std::vector<std::size_t>{act(*m, "A"), act(*m, "C")}));
    EXPECT_EQ(listed_transitions(s).size(), 2u);
    step(s, act(*m, "A"));
    step(s, act(*m, "C"));
    EXPECT_TRUE(enabled(s).empty());
    for (const auto& [lt, on] : listed_transitions(s)) EXPECT_FALSE(on);
    EXPECT_THROW(step(s, act(*m, "B")), TransitionNotEnabled);
}

TEST(Simulator, AgentReachesTerminal) {
    const auto m = shared("crossed");
    Session s = new_session(m, AutomataKind::ada3);
    step(s, act(*m, "A"));
    step(s, act(*m, "B"));
    EXPECT_FALSE(s.ada_position.nodes[0].has_value());
}

TEST(Simulator, UndoAndReset) {
    const auto m = shared("crossed");
    Session s = new_session(m, AutomataKind::sda3);
    EXPECT_THROW(undo(s), NothingToUndo);
    const SdaPosition start = s.sda_position;
    step(s, act(*m, "A"));
    undo(s);
    EXPECT_EQ(s.sda_position, start);
    step(s, act(*m, "C"));
    step(s, act(*m, "A"));
    reset(s);
    EXPECT_EQ(s.sda_position, start);
    EXPECT_TRUE(s.history.empty());
}

TEST(Simulator, TraceReplay) {
    const auto m = shared("crossed");
    Session s = new_session(m, AutomataKind::ada3);
    load_trace(s, {act(*m, "A"), act(*m, "C")});
    advance(s);
    advance(s);
    EXPECT_EQ(s.cursor, 2u);
    EXPECT_TRUE(enabled(s).empty());
    EXPECT_THROW(advance(s), TraceExhausted);
}

TEST(Simulator, LeavingTheTraceClearsThePin) {
    const auto m = shared("crossed");
    Session s = new_session(m, AutomataKind::sda3);
    load_trace(s, {act(*m, "A"), act(*m, "C")});
    step(s, act(*m, "C"));
    EXPECT_FALSE(s.pinned.has_value());
}

TEST(Simulator, BadTraceReportsFirstFailure) {
    const auto m = shared("crossed");
    Session s = new_session(m, AutomataKind::sda3);
    try {
        load_trace(s, {act(*m, "A"), act(*m, "D")});
        FAIL();
    } catch (const TraceMismatch& e) {
        EXPECT_EQ(e.index(), 1u);
    }
    EXPECT_FALSE(s.pinned.has_value());
}

TEST(Simulator, RandomWalksAgreeWithLts) {
    for (const auto& name : testing_support::corpus_names()) {
        const auto m = shared(name);
        const Lts lts = build_lts(*m);
        std::unordered_map<Configuration, std::size_t> index;
        for (std::size_t n = 0; n < lts.node_count(); ++n) index.emplace(lts.nodes[n], n);
        for (AutomataKind view : {AutomataKind::sda3, AutomataKind::ada3}) {
            std::mt19937_64 rng(42);
            for (int walk = 0; walk < 50; ++walk) {
                Session s = new_session(m, view);
                for (int k = 0; k < 30; ++k) {
                    const auto it = index.find(current_configuration(s));
                    ASSERT_NE(it, index.end());
                    std::vector<std::size_t> expected;
                    for (const Edge& e : lts.out(it->second)) expected.push_back(e.label);
                    const auto on = enabled(s);
                    ASSERT_EQ(on, expected);
                    if (on.empty()) break;
                    step(s, on[std::uniform_int_distribution<std::size_t>(0, on.size() - 1)(rng)]);
                }
            }
        }
    }
}
