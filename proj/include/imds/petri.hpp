#pragma once

// Place/transition net equivalent to a SystemModel: one place per state and
// per possible message, one transition per action, all arcs of weight 1.
// Structural analyses (siphons, traps, P-invariants, components) and the
// ANDL / DOT exports live here too.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "imds/graph.hpp"
#include "imds/lts.hpp"
#include "imds/model.hpp"
#include "imds/views.hpp"

namespace imds {

enum class PlaceKind { state, message };

struct Place {
    std::string name;
    /// Rendering metadata only (red state places, green message places).
    PlaceKind kind = PlaceKind::state;
    std::variant<ServerState, Message> origin;
};

struct Transition {
    std::string name;
    std::size_t action = 0;
};

struct PetriNet {
    std::string name;
    std::vector<Place> places;
    std::vector<Transition> transitions;
    /// Sorted place indices per transition.
    std::vector<std::vector<std::size_t>> inputs;
    std::vector<std::vector<std::size_t>> outputs;
    std::vector<std::uint32_t> initial_marking;

    std::optional<std::size_t> find_place(const std::string& n) const {
        for (std::size_t i = 0; i < places.size(); ++i)
            if (places[i].name == n) return i;
        return std::nullopt;
    }
};

using Marking = std::vector<std::uint32_t>;

struct MarkingHash {
    std::size_t operator()(const Marking& m) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto v : m) h = (h ^ v) * 0x100000001b3ull;
        return h;
    }
};

/// Edge labels are transition indices.
using MarkingGraph = StateGraph<Marking>;

inline std::string state_place_name(const SystemModel& m, const ServerState& p) {
    return "S_" + m.servers[p.server].name + "_" + m.servers[p.server].values[p.value];
}

inline std::string message_place_name(const SystemModel& m, const Message& msg) {
    return "M_" + m.agents[msg.agent] + "_" + m.servers[msg.server].name + "_" +
           m.servers[msg.server].services[msg.service];
}

/// Place index lookup shared by to_petri and the LTS correspondence.
struct PlaceIndex {
    std::vector<std::vector<std::size_t>> state;   // [server][value]
    std::map<Message, std::size_t> message;

    std::optional<std::size_t> of(const Message& msg) const {
        auto it = message.find(msg);
        if (it == message.end()) return std::nullopt;
        return it->second;
    }
};

inline PlaceIndex place_index(const SystemModel& m) {
    PlaceIndex idx;
    std::size_t k = 0;
    for (std::size_t s = 0; s < m.servers.size(); ++s) {
        idx.state.emplace_back();
        for (std::size_t v = 0; v < m.servers[s].values.size(); ++v) idx.state[s].push_back(k++);
    }
    for (std::size_t a = 0; a < m.agents.size(); ++a)
        for (const Message& msg : agent_messages(m, a)) idx.message.emplace(msg, k++);
    return idx;
}

/// Places: every state in server order, then every message that occurs in
/// the model, per agent in agent order. Transitions follow action order.
inline PetriNet to_petri(const SystemModel& m) {
    PetriNet net;
    net.name = m.name;
    for (std::size_t s = 0; s < m.servers.size(); ++s)
        for (std::size_t v = 0; v < m.servers[s].values.size(); ++v)
            net.places.push_back({state_place_name(m, {s, v}), PlaceKind::state, ServerState{s, v}});
    for (std::size_t a = 0; a < m.agents.size(); ++a)
        for (const Message& msg : agent_messages(m, a))
            net.places.push_back({message_place_name(m, msg), PlaceKind::message, msg});

    const PlaceIndex idx = place_index(m);
    for (std::size_t i = 0; i < m.actions.size(); ++i) {
        const Action& a = m.actions[i];
        net.transitions.push_back({"T" + std::to_string(i) + "_" + m.servers[a.in_message.server].name + "_" +
                                       m.servers[a.in_message.server].services[a.in_message.service],
                                   i});
        std::vector<std::size_t> in{*idx.of(a.in_message), idx.state[a.in_state.server][a.in_state.value]};
        std::vector<std::size_t> out{idx.state[a.out_state.server][a.out_state.value]};
        if (a.out_message) out.push_back(*idx.of(*a.out_message));
        std::sort(in.begin(), in.end());
        std::sort(out.begin(), out.end());
        net.inputs.push_back(std::move(in));
        net.outputs.push_back(std::move(out));
    }
    net.initial_marking.assign(net.places.size(), 0);
    for (std::size_t s = 0; s < m.servers.size(); ++s)
        if (m.initial_value[s]) net.initial_marking[idx.state[s][*m.initial_value[s]]] = 1;
    for (const auto& msg : m.initial_message)
        if (msg) net.initial_marking[*idx.of(*msg)] = 1;
    return net;
}

inline bool transition_enabled(const PetriNet& net, const Marking& mk, std::size_t t) {
    // Inputs are distinct places for converted nets; count multiplicity anyway.
    for (std::size_t i = 0; i < net.inputs[t].size(); ++i) {
        const std::size_t p = net.inputs[t][i];
        const auto need = static_cast<std::uint32_t>(std::count(net.inputs[t].begin(), net.inputs[t].end(), p));
        if (mk[p] < need) return false;
    }
    return true;
}

inline Marking fire(const PetriNet& net, const Marking& mk, std::size_t t) {
    Marking next = mk;
    for (std::size_t p : net.inputs[t]) --next[p];
    for (std::size_t p : net.outputs[t]) ++next[p];
    return next;
}

inline MarkingGraph marking_graph(const PetriNet& net, const Limits& limits = {}) {
    auto expand = [&](const Marking& mk, auto&& emit) {
        for (std::size_t t = 0; t < net.transitions.size(); ++t)
            if (transition_enabled(net, mk, t)) emit(t, fire(net, mk, t));
    };
    return explore<Marking, MarkingHash>(net.initial_marking, expand, limits, "marking graph");
}

/// Marking with tokens exactly on the configuration's state and message places.
inline std::optional<Marking> marking_of(const SystemModel& m, const PlaceIndex& idx, std::size_t place_count,
                                         const Configuration& c) {
    Marking mk(place_count, 0);
    for (std::size_t s = 0; s < c.values.size(); ++s) ++mk[idx.state[s][c.values[s]]];
    for (const auto& msg : c.messages) {
        if (!msg) continue;
        auto p = idx.of(*msg);
        if (!p) return std::nullopt;
        ++mk[*p];
    }
    (void)m;
    return mk;
}

/// Checks the net against the model arc by arc, then checks that the
/// configuration -> marking map is an edge-preserving bijection between the
/// LTS and the marking graph with action i <-> transition i.
inline IsoResult check_iso_with_lts(const SystemModel& m, const PetriNet& net, const MarkingGraph& mg, const Lts& lts) {
    IsoResult fail;
    const PlaceIndex idx = place_index(m);
    std::size_t expected_places = 0;
    for (const auto& s : m.servers) expected_places += s.values.size();
    expected_places += idx.message.size();
    if (net.places.size() != expected_places) {
        fail.mismatch = "net has " + std::to_string(net.places.size()) + " places, model needs " + std::to_string(expected_places);
        return fail;
    }
    if (net.transitions.size() != m.actions.size()) {
        fail.mismatch = "net has " + std::to_string(net.transitions.size()) + " transitions for " +
                        std::to_string(m.actions.size()) + " actions";
        return fail;
    }
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        const Action& a = m.actions[net.transitions[t].action];
        std::vector<std::size_t> in{*idx.of(a.in_message), idx.state[a.in_state.server][a.in_state.value]};
        std::vector<std::size_t> out{idx.state[a.out_state.server][a.out_state.value]};
        if (a.out_message) out.push_back(*idx.of(*a.out_message));
        std::sort(in.begin(), in.end());
        std::sort(out.begin(), out.end());
        if (net.transitions[t].action != t || net.inputs[t] != in || net.outputs[t] != out) {
            fail.mismatch = "transition " + net.transitions[t].name + " does not match action " + action_label(m, t);
            return fail;
        }
    }
    const auto image = [&](const Configuration& c) {
        return marking_of(m, idx, net.places.size(), c).value_or(Marking{});
    };
    return check_graph_iso<Configuration, Marking, MarkingHash>(lts, mg, image, [](std::size_t l) { return l; });
}

// ---------------------------------------------------------------------------
// Siphons and traps

using PlaceSet = std::vector<std::size_t>;

namespace petri_detail {

struct Adjacency {
    std::vector<std::vector<std::size_t>> pre;   // place -> transitions producing into it
    std::vector<std::vector<std::size_t>> post;  // place -> transitions consuming from it
};

inline Adjacency adjacency(const PetriNet& net) {
    Adjacency adj;
    adj.pre.resize(net.places.size());
    adj.post.resize(net.places.size());
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (std::size_t p : net.inputs[t]) adj.post[p].push_back(t);
        for (std::size_t p : net.outputs[t]) adj.pre[p].push_back(t);
    }
    return adj;
}

/// Siphon search works on (producers, consumers-of-transition) and traps on
/// the reversed net, so one routine serves both.
struct Orientation {
    const std::vector<std::vector<std::size_t>>* into;   // place -> transitions that must be "covered"
    const std::vector<std::vector<std::size_t>>* cover;  // transition -> places that cover it
};

inline bool holds(const Orientation& o, const std::vector<bool>& in_set, std::size_t* bad_t = nullptr) {
    for (std::size_t p = 0; p < in_set.size(); ++p) {
        if (!in_set[p]) continue;
        for (std::size_t t : (*o.into)[p]) {
            bool covered = false;
            for (std::size_t q : (*o.cover)[t]) covered = covered || in_set[q];
            if (!covered) {
                if (bad_t) *bad_t = t;
                return false;
            }
        }
    }
    return true;
}

/// Largest subset of `set` satisfying the inclusion (possibly empty).
inline std::vector<bool> largest_within(const Orientation& o, std::vector<bool> set) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t p = 0; p < set.size(); ++p) {
            if (!set[p]) continue;
            for (std::size_t t : (*o.into)[p]) {
                bool covered = false;
                for (std::size_t q : (*o.cover)[t]) covered = covered || set[q];
                if (!covered) {
                    set[p] = false;
                    changed = true;
                    break;
                }
            }
        }
    }
    return set;
}

inline bool is_minimal(const Orientation& o, const std::vector<bool>& set) {
    for (std::size_t p = 0; p < set.size(); ++p) {
        if (!set[p]) continue;
        auto smaller = set;
        smaller[p] = false;
        const auto inner = largest_within(o, smaller);
        if (std::find(inner.begin(), inner.end(), true) != inner.end()) return false;
    }
    return true;
}

inline bool canonical_less(const PlaceSet& a, const PlaceSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

/// Branching search: grow a set from each seed place; whenever a
/// transition violates the inclusion, branch on which of its covering
/// places to add. Every minimal set containing the seed is reached.
inline std::vector<PlaceSet> minimal_sets(const Orientation& o, std::size_t places, std::size_t max_results,
                                          std::size_t budget, const char* what) {
    std::set<PlaceSet> found;
    std::size_t steps = 0;
    std::vector<std::vector<bool>> stack;
    for (std::size_t seed = 0; seed < places; ++seed) {
        std::vector<bool> start(places, false);
        start[seed] = true;
        stack.push_back(std::move(start));
        std::set<std::vector<bool>> visited;
        while (!stack.empty()) {
            if (++steps > budget) throw LimitExceeded(std::string(what) + " search budget exhausted", found.size(), steps);
            std::vector<bool> cur = std::move(stack.back());
            stack.pop_back();
            if (!visited.insert(cur).second) continue;
            // Any set containing a known minimal one cannot be minimal.
            bool dominated = false;
            for (const PlaceSet& f : found) {
                bool sub = true;
                for (std::size_t p : f) sub = sub && cur[p];
                if (sub) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) continue;
            std::size_t bad = 0;
            if (holds(o, cur, &bad)) {
                if (is_minimal(o, cur)) {
                    PlaceSet ps;
                    for (std::size_t p = 0; p < places; ++p)
                        if (cur[p]) ps.push_back(p);
                    found.insert(std::move(ps));
                    if (found.size() > max_results) throw LimitExceeded(std::string(what) + " result limit exceeded", found.size(), steps);
                }
                continue;
            }
            for (std::size_t q : (*o.cover)[bad]) {
                if (cur[q]) continue;
                auto next = cur;
                next[q] = true;
                stack.push_back(std::move(next));
            }
        }
    }
    std::vector<PlaceSet> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

} // namespace petri_detail

/// Exhaustive up to this many places; larger nets run on the step budget.
inline constexpr std::size_t exhaustive_place_bound = 24;

inline std::size_t default_siphon_budget(const PetriNet& net) {
    return net.places.size() <= exhaustive_place_bound ? SIZE_MAX : 200'000;
}

/// Minimal sets D with pre-set(D) contained in post-set(D).
inline std::vector<PlaceSet> minimal_siphons(const PetriNet& net, std::size_t max_results = 10'000,
                                             std::optional<std::size_t> budget = std::nullopt) {
    const auto adj = petri_detail::adjacency(net);
    const petri_detail::Orientation o{&adj.pre, &net.inputs};
    return petri_detail::minimal_sets(o, net.places.size(), max_results, budget.value_or(default_siphon_budget(net)),
                                      "siphon");
}

/// Minimal sets D with post-set(D) contained in pre-set(D).
inline std::vector<PlaceSet> minimal_traps(const PetriNet& net, std::size_t max_results = 10'000,
                                           std::optional<std::size_t> budget = std::nullopt) {
    const auto adj = petri_detail::adjacency(net);
    const petri_detail::Orientation o{&adj.post, &net.outputs};
    return petri_detail::minimal_sets(o, net.places.size(), max_results, budget.value_or(default_siphon_budget(net)),
                                      "trap");
}

inline bool is_siphon(const PetriNet& net, const PlaceSet& d) {
    std::set<std::size_t> consumers, producers;
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (std::size_t p : d) {
            if (std::count(net.outputs[t].begin(), net.outputs[t].end(), p)) producers.insert(t);
            if (std::count(net.inputs[t].begin(), net.inputs[t].end(), p)) consumers.insert(t);
        }
    }
    return !d.empty() && std::includes(consumers.begin(), consumers.end(), producers.begin(), producers.end());
}

inline bool is_trap(const PetriNet& net, const PlaceSet& d) {
    std::set<std::size_t> consumers, producers;
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (std::size_t p : d) {
            if (std::count(net.outputs[t].begin(), net.outputs[t].end(), p)) producers.insert(t);
            if (std::count(net.inputs[t].begin(), net.inputs[t].end(), p)) consumers.insert(t);
        }
    }
    return !d.empty() && std::includes(producers.begin(), producers.end(), consumers.begin(), consumers.end());
}

/// First marking (BFS order) with no token on any place of the siphon.
inline std::optional<std::size_t> siphon_emptiable(const PlaceSet& siphon, const MarkingGraph& mg) {
    for (std::size_t n = 0; n < mg.node_count(); ++n) {
        bool empty = true;
        for (std::size_t p : siphon) empty = empty && mg.nodes[n][p] == 0;
        if (empty) return n;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// P-invariants

inline std::vector<std::vector<std::int64_t>> incidence_matrix(const PetriNet& net) {
    std::vector<std::vector<std::int64_t>> c(net.places.size(), std::vector<std::int64_t>(net.transitions.size(), 0));
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (std::size_t p : net.inputs[t]) --c[p][t];
        for (std::size_t p : net.outputs[t]) ++c[p][t];
    }
    return c;
}

/// Minimal-support non-negative integer solutions of x^T C = 0, by Farkas
/// elimination over the rows [C | I]. Each vector is divided by its gcd.
inline std::vector<std::vector<std::int64_t>> p_invariants(const PetriNet& net) {
    const std::size_t np = net.places.size(), nt = net.transitions.size();
    struct Row {
        std::vector<std::int64_t> c;  // remaining incidence columns
        std::vector<std::int64_t> x;  // place weights
    };
    const auto inc = incidence_matrix(net);
    std::vector<Row> rows;
    for (std::size_t p = 0; p < np; ++p) {
        Row r{inc[p], std::vector<std::int64_t>(np, 0)};
        r.x[p] = 1;
        rows.push_back(std::move(r));
    }
    auto normalize = [](Row& r) {
        std::int64_t g = 0;
        for (auto v : r.c) g = std::gcd(g, v < 0 ? -v : v);
        for (auto v : r.x) g = std::gcd(g, v);
        if (g > 1) {
            for (auto& v : r.c) v /= g;
            for (auto& v : r.x) v /= g;
        }
    };
    auto support_subset = [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != 0 && b[i] == 0) return false;
        return true;
    };
    for (std::size_t t = 0; t < nt; ++t) {
        std::vector<Row> next;
        std::vector<const Row*> pos, neg;
        for (const Row& r : rows) {
            if (r.c[t] == 0) next.push_back(r);
            else if (r.c[t] > 0) pos.push_back(&r);
            else neg.push_back(&r);
        }
        for (const Row* a : pos) {
            for (const Row* b : neg) {
                const std::int64_t ka = -b->c[t], kb = a->c[t];
                Row r{std::vector<std::int64_t>(nt), std::vector<std::int64_t>(np)};
                for (std::size_t j = 0; j < nt; ++j) r.c[j] = ka * a->c[j] + kb * b->c[j];
                for (std::size_t j = 0; j < np; ++j) r.x[j] = ka * a->x[j] + kb * b->x[j];
                normalize(r);
                next.push_back(std::move(r));
            }
        }
        // Keep minimal supports only; drop duplicates.
        std::vector<bool> drop(next.size(), false);
        for (std::size_t i = 0; i < next.size(); ++i) {
            for (std::size_t j = 0; j < next.size() && !drop[i]; ++j) {
                if (i == j) continue;
                const bool sub = support_subset(next[j].x, next[i].x);
                const bool same = sub && support_subset(next[i].x, next[j].x);
                if (sub && (!same || j < i)) drop[i] = true;
            }
        }
        std::vector<Row> kept;
        for (std::size_t i = 0; i < next.size(); ++i)
            if (!drop[i]) kept.push_back(std::move(next[i]));
        rows = std::move(kept);
    }
    std::vector<std::vector<std::int64_t>> out;
    for (const Row& r : rows) out.push_back(r.x);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        std::vector<std::size_t> sa, sb;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i]) sa.push_back(i);
            if (b[i]) sb.push_back(i);
        }
        if (sa != sb) return petri_detail::canonical_less(sa, sb);
        return a < b;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Structural report

struct StructuralReport {
    /// Component id per place and per transition (weakly connected).
    std::size_t components = 0;
    std::vector<std::size_t> place_component;
    std::vector<std::size_t> transition_component;
    std::vector<std::size_t> dead_transitions;
    std::vector<std::uint32_t> max_tokens;
    bool safe = true;
};

inline StructuralReport structural_report(const PetriNet& net, const MarkingGraph& mg) {
    StructuralReport r;
    const std::size_t np = net.places.size(), nt = net.transitions.size();
    std::vector<std::size_t> parent(np + nt);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t t = 0; t < nt; ++t) {
        for (std::size_t p : net.inputs[t]) parent[find(p)] = find(np + t);
        for (std::size_t p : net.outputs[t]) parent[find(p)] = find(np + t);
    }
    std::map<std::size_t, std::size_t> ids;
    auto comp = [&](std::size_t x) {
        auto [it, inserted] = ids.emplace(find(x), ids.size());
        return it->second;
    };
    for (std::size_t p = 0; p < np; ++p) r.place_component.push_back(comp(p));
    for (std::size_t t = 0; t < nt; ++t) r.transition_component.push_back(comp(np + t));
    r.components = ids.size();

    std::vector<bool> fired(nt, false);
    for (const Edge& e : mg.edges) fired[e.label] = true;
    for (std::size_t t = 0; t < nt; ++t)
        if (!fired[t]) r.dead_transitions.push_back(t);
    r.max_tokens.assign(np, 0);
    for (const Marking& mk : mg.nodes)
        for (std::size_t p = 0; p < np; ++p) r.max_tokens[p] = std::max(r.max_tokens[p], mk[p]);
    r.safe = std::all_of(r.max_tokens.begin(), r.max_tokens.end(), [](std::uint32_t v) { return v <= 1; });
    return r;
}

// ---------------------------------------------------------------------------
// Exports

inline std::string andl_name(const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
    return out.empty() ? "net" : out;
}

/// ANDL text: `pn [name] {`, a discrete places section, and a discrete
/// transitions section with `[place - 1]` / `[place + 1]` update terms.
inline std::string to_andl(const PetriNet& net) {
    std::ostringstream out;
    out << "pn [" << andl_name(net.name) << "] {\n";
    out << "places:\n  discrete:\n";
    for (std::size_t p = 0; p < net.places.size(); ++p)
        out << "    " << net.places[p].name << " = " << net.initial_marking[p] << ";\n";
    out << "transitions:\n  discrete:\n";
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        std::vector<std::string> terms;
        for (std::size_t p : net.inputs[t]) terms.push_back("[" + net.places[p].name + " - 1]");
        for (std::size_t p : net.outputs[t]) terms.push_back("[" + net.places[p].name + " + 1]");
        out << "    " << net.transitions[t].name << "\n      :\n      : ";
        for (std::size_t i = 0; i < terms.size(); ++i) out << (i ? " & " : "") << terms[i];
        out << "\n      : 1\n      ;\n";
    }
    out << "}\n";
    return out.str();
}

inline std::string petri_dot(const PetriNet& net, const Marking* marking = nullptr) {
    const Marking& mk = marking ? *marking : net.initial_marking;
    std::ostringstream out;
    out << "digraph \"" << detail::dot_escape(net.name) << "\" {\n  rankdir=LR;\n";
    for (std::size_t p = 0; p < net.places.size(); ++p) {
        const bool state = net.places[p].kind == PlaceKind::state;
        out << "  p" << p << " [shape=circle, style=filled, fillcolor=\"" << (state ? "#f4b6b6" : "#b8e0b0")
            << "\", label=\"" << net.places[p].name << "\\n" << mk[p] << "\"";
        if (net.initial_marking[p]) out << ", penwidth=2.5";
        out << "];\n";
    }
    for (std::size_t t = 0; t < net.transitions.size(); ++t)
        out << "  t" << t << " [shape=box, label=\"" << net.transitions[t].name << "\"];\n";
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (std::size_t p : net.inputs[t]) out << "  p" << p << " -> t" << t << ";\n";
        for (std::size_t p : net.outputs[t]) out << "  t" << t << " -> p" << p << ";\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace imds
