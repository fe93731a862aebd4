#pragma once

// Step-by-step execution over the automata of one view. Only the current
// position is kept; history is a list of action ids and undo replays it.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imds/automata.hpp"
#include "imds/error.hpp"
#include "imds/model.hpp"

namespace imds {

class TransitionNotEnabled : public Error {
public:
    explicit TransitionNotEnabled(std::string what) : Error("transition not enabled: " + what) {}
};

class NothingToUndo : public Error {
public:
    NothingToUndo() : Error("nothing to undo") {}
};

class TraceMismatch : public Error {
public:
    TraceMismatch(std::size_t index, const std::string& what)
        : Error("trace mismatch at step " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class TraceExhausted : public Error {
public:
    TraceExhausted() : Error("no pinned action left to advance") {}
};

struct Session {
    std::shared_ptr<const SystemModel> model;
    AutomataKind view = AutomataKind::sda3;
    std::vector<ServerAutomaton> sda;
    std::vector<AgentAutomaton> ada;
    SdaPosition sda_position;
    AdaPosition ada_position;
    std::vector<std::size_t> history;
    std::optional<std::vector<std::size_t>> pinned;
    std::size_t cursor = 0;
};

/// Result of a step: the fired action and the automaton to focus next
/// (SDA3: the server the produced message goes to; ADA3: the same agent).
struct StepResult {
    std::size_t action = 0;
    std::size_t focus = 0;
};

inline Session new_session(std::shared_ptr<const SystemModel> model, AutomataKind view) {
    Session s;
    s.view = view;
    if (view == AutomataKind::sda3) {
        s.sda = to_sda3(*model);
        s.sda_position = initial_position(s.sda);
    } else {
        s.ada = to_ada3(*model);
        s.ada_position = initial_position(s.ada, *model);
    }
    s.model = std::move(model);
    return s;
}

inline std::size_t automaton_count(const Session& s) {
    return s.view == AutomataKind::sda3 ? s.sda.size() : s.ada.size();
}

inline std::vector<std::pair<LocalTransition, bool>> listed_transitions(const Session& s) {
    return s.view == AutomataKind::sda3 ? outgoing(s.sda, s.sda_position) : outgoing(s.ada, s.ada_position);
}

/// Enabled action ids, ascending.
inline std::vector<std::size_t> enabled(const Session& s) {
    std::vector<LocalTransition> lts = s.view == AutomataKind::sda3 ? enabled_transitions(s.sda, s.sda_position)
                                                                    : enabled_transitions(s.ada, s.ada_position);
    std::vector<std::size_t> out;
    for (const auto& lt : lts) out.push_back(lt.action);
    return out;
}

inline Configuration current_configuration(const Session& s) {
    return s.view == AutomataKind::sda3 ? configuration_of(*s.model, s.sda_position)
                                        : configuration_of(s.ada, s.ada_position);
}

namespace sim_detail {

inline StepResult fire_action(Session& s, std::size_t action) {
    if (s.view == AutomataKind::sda3) {
        for (const auto& lt : enabled_transitions(s.sda, s.sda_position)) {
            if (lt.action != action) continue;
            s.sda_position = fire(s.sda, s.sda_position, lt);
            const auto& out = s.sda[lt.automaton].transitions[lt.transition].output;
            return {action, out ? out->server : lt.automaton};
        }
    } else {
        for (const auto& lt : enabled_transitions(s.ada, s.ada_position)) {
            if (lt.action != action) continue;
            s.ada_position = fire(s.ada, s.ada_position, lt);
            return {action, lt.automaton};
        }
    }
    throw TransitionNotEnabled(action < s.model->actions.size() ? action_label(*s.model, action)
                                                                : "#" + std::to_string(action));
}

inline void rewind(Session& s) {
    if (s.view == AutomataKind::sda3) s.sda_position = initial_position(s.sda);
    else s.ada_position = initial_position(s.ada, *s.model);
}

} // namespace sim_detail

/// Fires an enabled action. Leaving the pinned trace clears the pin.
inline StepResult step(Session& s, std::size_t action) {
    StepResult r = sim_detail::fire_action(s, action);
    s.history.push_back(action);
    if (s.pinned) {
        if (s.cursor < s.pinned->size() && (*s.pinned)[s.cursor] == action) {
            ++s.cursor;
        } else {
            s.pinned.reset();
            s.cursor = 0;
        }
    }
    return r;
}

inline void undo(Session& s) {
    if (s.history.empty()) throw NothingToUndo();
    s.history.pop_back();
    sim_detail::rewind(s);
    for (std::size_t a : s.history) sim_detail::fire_action(s, a);
    if (s.pinned && s.cursor > 0) --s.cursor;
}

/// Back to the initial position; a pinned trace stays pinned at cursor 0.
inline void reset(Session& s) {
    s.history.clear();
    s.cursor = 0;
    sim_detail::rewind(s);
}

/// Validates the trace from the initial position, then resets and pins it.
inline void load_trace(Session& s, const std::vector<std::size_t>& trace) {
    Session probe = s;
    reset(probe);
    probe.pinned.reset();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        try {
            sim_detail::fire_action(probe, trace[i]);
        } catch (const TransitionNotEnabled& e) {
            throw TraceMismatch(i, e.what());
        }
    }
    reset(s);
    s.pinned = trace;
}

inline StepResult advance(Session& s) {
    if (!s.pinned || s.cursor >= s.pinned->size()) throw TraceExhausted();
    return step(s, (*s.pinned)[s.cursor]);
}

} // namespace imds
