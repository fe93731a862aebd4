#pragma once

// Reader and writer for `.imds` specifications in server view or agent view.
// Templates are expanded to a ground SystemModel; see docs/format.md.

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "imds/error.hpp"
#include "imds/model.hpp"

namespace imds {

enum class View { server, agent };

inline const char* view_name(View v) { return v == View::server ? "server" : "agent"; }

struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ParseErrorKind { syntax, unknown_identifier, arity_mismatch, duplicate_name, constraint_violation };

inline const char* parse_error_kind_name(ParseErrorKind k) {
    switch (k) {
    case ParseErrorKind::syntax: return "syntax error";
    case ParseErrorKind::unknown_identifier: return "unknown identifier";
    case ParseErrorKind::arity_mismatch: return "arity mismatch";
    case ParseErrorKind::duplicate_name: return "duplicate name";
    case ParseErrorKind::constraint_violation: return "constraint violation";
    }
    return "error";
}

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, SourceSpan span, const std::string& detail)
        : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
                parse_error_kind_name(kind) + ": " + detail),
          kind_(kind), span_(span), detail_(detail) {}

    ParseErrorKind kind() const noexcept { return kind_; }
    const SourceSpan& span() const noexcept { return span_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ParseErrorKind kind_;
    SourceSpan span_;
    std::string detail_;
};

struct ParseResult {
    SystemModel model;
    View view = View::server;
};

namespace parse_detail {

struct Token {
    enum Kind { ident, punct, end } kind = end;
    std::string text;
    SourceSpan span;
};

inline bool is_keyword(std::string_view s) {
    static const std::set<std::string_view> kw{"system",   "server", "agent",   "servers", "agents",
                                               "services", "states", "actions", "init"};
    return kw.count(s) > 0;
}

inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
        } else if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            Token t{Token::ident, std::string(src.substr(i, j - i)), {line, col, j - i}};
            if (!std::isalpha(static_cast<unsigned char>(c)))
                throw ParseError(ParseErrorKind::syntax, t.span, "identifier must start with a letter: " + t.text);
            out.push_back(std::move(t));
            advance(j - i);
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Token::punct, "->", {line, col, 2}});
            advance(2);
        } else if (std::string_view(":;,.(){}").find(c) != std::string_view::npos) {
            out.push_back({Token::punct, std::string(1, c), {line, col, 1}});
            advance(1);
        } else {
            throw ParseError(ParseErrorKind::syntax, {line, col, 1}, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::end, "", {line, col, 0}});
    return out;
}

struct Name {
    std::string text;
    SourceSpan span;
};

struct RawMessage {
    Name agent, server, service;
};
struct RawState {
    Name server, value;
};
struct RawAction {
    std::optional<Name> label;
    RawMessage in;
    RawState in_state;
    std::optional<RawMessage> out;
    RawState out_state;
    SourceSpan span;
};
struct Formal {
    Name name;
    std::optional<Name> type;
};
struct TypeDecl {
    Name name;
    bool is_agent = false;
    std::vector<Formal> agent_formals;
    std::vector<Formal> server_formals;
    std::vector<Name> services;
    std::vector<Name> states;
    std::vector<RawAction> actions;
    bool has_actions = false;
};
struct VarDecl {
    Name name;
    Name type;
};
struct InitItem {
    Name head;
    std::optional<std::vector<Name>> args;
    std::vector<Name> tail;
    SourceSpan span;
};
struct Document {
    Name system;
    std::vector<TypeDecl> types;
    std::vector<VarDecl> server_vars;
    std::vector<VarDecl> agent_vars;
    std::vector<InitItem> init;
    SourceSpan init_span;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Document document() {
        Document d;
        expect_word("system");
        d.system = name();
        accept(";");
        bool seen_init = false;
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind != Token::ident) fail(t, "expected a declaration");
            if ((t.text == "server" || t.text == "agent") && peek(1).text == ":") {
                d.types.push_back(type_decl());
            } else if (t.text == "servers") {
                next();
                var_list(d.server_vars);
            } else if (t.text == "agents") {
                next();
                var_list(d.agent_vars);
            } else if (t.text == "init") {
                if (seen_init) fail(t, "second init block");
                seen_init = true;
                d.init_span = t.span;
                init_block(d.init);
            } else {
                fail(t, "expected server:, agent:, servers, agents or init, found '" + t.text + "'");
            }
        }
        if (!seen_init) fail(peek(), "missing init block");
        return d;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::end; }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw ParseError(ParseErrorKind::syntax, t.span, msg);
    }
    bool is(std::string_view p) const { return peek().kind == Token::punct && peek().text == p; }
    bool accept(std::string_view p) {
        if (!is(p)) return false;
        next();
        return true;
    }
    void expect(std::string_view p) {
        if (!accept(p))
            fail(peek(), "expected '" + std::string(p) + "'" + (at_end() ? " before end of input" : ", found '" + peek().text + "'"));
    }
    bool is_word(std::string_view w) const { return peek().kind == Token::ident && peek().text == w; }
    void expect_word(std::string_view w) {
        if (!is_word(w)) fail(peek(), "expected '" + std::string(w) + "'");
        next();
    }
    Name name() {
        const Token& t = peek();
        if (t.kind != Token::ident) fail(t, "expected an identifier");
        if (is_keyword(t.text)) fail(t, "keyword '" + t.text + "' cannot be used as a name");
        next();
        return {t.text, t.span};
    }

    void formals(TypeDecl& d) {
        expect("(");
        if (accept(")")) return;
        do {
            const Token& g = peek();
            std::vector<Formal>* into = nullptr;
            if (is_word("agents")) into = &d.agent_formals;
            else if (is_word("servers")) into = &d.server_formals;
            else fail(g, "expected 'agents' or 'servers' in parameter list");
            next();
            do {
                Formal f{name(), std::nullopt};
                if (accept(":")) f.type = name();
                into->push_back(std::move(f));
            } while (accept(","));
        } while (accept(";"));
        expect(")");
    }

    std::vector<Name> name_set() {
        std::vector<Name> out;
        expect("{");
        while (!is("}")) {
            out.push_back(name());
            if (!accept(",")) break;
        }
        expect("}");
        return out;
    }

    TypeDecl type_decl() {
        TypeDecl d;
        d.is_agent = peek().text == "agent";
        next();
        expect(":");
        d.name = name();
        if (is("(")) formals(d);
        for (;;) {
            const bool comma = accept(",");
            if (is_word("services") || is_word("states")) {
                const Token& kw = next();
                if (d.is_agent) fail(kw, "agent types declare only actions");
                auto& list = kw.text == "services" ? d.services : d.states;
                auto items = name_set();
                list.insert(list.end(), items.begin(), items.end());
            } else if (is_word("actions")) {
                next();
                d.has_actions = true;
                action_block(d.actions);
            } else {
                // A trailing comma before the next declaration is tolerated.
                (void)comma;
                break;
            }
        }
        accept(";");
        return d;
    }

    void action_block(std::vector<RawAction>& out) {
        expect("{");
        while (!is("}")) {
            out.push_back(action());
            accept(",");
        }
        expect("}");
    }

    std::vector<Name> dotted() {
        std::vector<Name> parts{name()};
        while (accept(".")) parts.push_back(name());
        return parts;
    }

    RawAction action() {
        RawAction a;
        a.span = peek().span;
        if (peek().kind == Token::ident && peek(1).text == ":") {
            a.label = name();
            expect(":");
        }
        const Token& open = peek();
        expect("{");
        auto m = dotted();
        if (m.size() != 3) fail(open, "input message must have the form agent.server.service");
        a.in = {m[0], m[1], m[2]};
        expect(",");
        auto p = dotted();
        if (p.size() != 2) fail(open, "input state must have the form server.value");
        a.in_state = {p[0], p[1]};
        expect("}");
        expect("->");
        expect("{");
        auto first = dotted();
        if (first.size() == 3) {
            a.out = RawMessage{first[0], first[1], first[2]};
            expect(",");
            auto q = dotted();
            if (q.size() != 2) fail(open, "output state must have the form server.value");
            a.out_state = {q[0], q[1]};
        } else if (first.size() == 2) {
            a.out_state = {first[0], first[1]};
        } else {
            fail(open, "output must be {agent.server.service, server.value} or {server.value}");
        }
        const Token& close = peek();
        expect("}");
        a.span.length = close.span.line == a.span.line ? close.span.column + 1 - a.span.column : 1;
        return a;
    }

    void var_list(std::vector<VarDecl>& out) {
        do {
            VarDecl v;
            v.name = name();
            v.type = accept(":") ? name() : v.name;
            out.push_back(std::move(v));
        } while (accept(","));
        expect(";");
    }

    void init_block(std::vector<InitItem>& out) {
        expect_word("init");
        expect("->");
        expect("{");
        while (!is("}")) {
            InitItem it;
            it.span = peek().span;
            it.head = name();
            if (accept("(")) {
                it.args.emplace();
                while (!is(")")) {
                    it.args->push_back(name());
                    if (!accept(",")) break;
                }
                expect(")");
            }
            expect(".");
            it.tail.push_back(name());
            while (accept(".")) it.tail.push_back(name());
            if (it.tail.size() > 2) fail(peek(), "initial item has too many components");
            out.push_back(std::move(it));
            accept(",");
        }
        expect("}");
        accept(".");
    }
};

[[noreturn]] inline void raise(ParseErrorKind k, const SourceSpan& s, const std::string& msg) {
    throw ParseError(k, s, msg);
}

/// Turns the declarations into a ground model.
class Elaborator {
public:
    explicit Elaborator(const Document& doc) : doc_(doc) {}

    ParseResult run() {
        collect_types();
        collect_variables();
        collect_init();
        expand_actions();
        return finish();
    }

private:
    const Document& doc_;
    View view_ = View::server;
    std::map<std::string, const TypeDecl*> server_types_, agent_types_;
    std::vector<const TypeDecl*> server_var_type_, agent_var_type_;
    std::map<std::string, std::size_t> server_index_, agent_index_;
    SystemModel model_;
    // Actual variable bound to each formal, per instance.
    std::vector<std::map<std::string, std::size_t>> server_agent_binding_, server_server_binding_;
    std::vector<std::map<std::string, std::size_t>> agent_server_binding_;
    std::vector<SourceSpan> action_spans_;

    void collect_types() {
        for (const TypeDecl& t : doc_.types) {
            auto& table = t.is_agent ? agent_types_ : server_types_;
            if (!table.emplace(t.name.text, &t).second)
                raise(ParseErrorKind::duplicate_name, t.name.span, "type '" + t.name.text + "' declared twice");
            if (t.is_agent) view_ = View::agent;
            check_unique(t.services, "service");
            check_unique(t.states, "state");
            check_unique(t.agent_formals, "agent parameter");
            check_unique(t.server_formals, "server parameter");
            std::set<std::string> labels;
            for (const RawAction& a : t.actions)
                if (a.label && !labels.insert(a.label->text).second)
                    raise(ParseErrorKind::duplicate_name, a.label->span, "action label '" + a.label->text + "' used twice");
            if (t.is_agent && !t.agent_formals.empty())
                raise(ParseErrorKind::syntax, t.agent_formals.front().name.span, "agent types take only server parameters");
        }
        if (view_ == View::agent) {
            for (const TypeDecl& t : doc_.types)
                if (!t.is_agent && t.has_actions)
                    raise(ParseErrorKind::syntax, t.name.span,
                          "server type '" + t.name.text + "' declares actions in an agent-view specification");
        }
    }

    template <class Items>
    static void check_unique(const Items& items, const std::string& what) {
        std::set<std::string> seen;
        for (const auto& it : items) {
            const Name& n = name_of(it);
            if (!seen.insert(n.text).second) raise(ParseErrorKind::duplicate_name, n.span, what + " '" + n.text + "' declared twice");
        }
    }
    static const Name& name_of(const Name& n) { return n; }
    static const Name& name_of(const Formal& f) { return f.name; }

    void collect_variables() {
        for (const VarDecl& v : doc_.server_vars) {
            auto t = server_types_.find(v.type.text);
            if (t == server_types_.end())
                raise(ParseErrorKind::unknown_identifier, v.type.span, "unknown server type '" + v.type.text + "'");
            if (!server_index_.emplace(v.name.text, model_.servers.size()).second)
                raise(ParseErrorKind::duplicate_name, v.name.span, "server '" + v.name.text + "' declared twice");
            Server s;
            s.name = v.name.text;
            for (const Name& n : t->second->states) s.values.push_back(n.text);
            for (const Name& n : t->second->services) s.services.push_back(n.text);
            model_.servers.push_back(std::move(s));
            server_var_type_.push_back(t->second);
        }
        for (const VarDecl& v : doc_.agent_vars) {
            const TypeDecl* type = nullptr;
            if (view_ == View::agent) {
                auto t = agent_types_.find(v.type.text);
                if (t == agent_types_.end())
                    raise(ParseErrorKind::unknown_identifier, v.type.span, "unknown agent type '" + v.type.text + "'");
                type = t->second;
            } else if (v.type.text != v.name.text) {
                raise(ParseErrorKind::unknown_identifier, v.type.span,
                      "agents are untyped in a server-view specification: '" + v.type.text + "'");
            }
            if (!agent_index_.emplace(v.name.text, model_.agents.size()).second)
                raise(ParseErrorKind::duplicate_name, v.name.span, "agent '" + v.name.text + "' declared twice");
            model_.agents.push_back(v.name.text);
            agent_var_type_.push_back(type);
        }
        model_.name = doc_.system.text;
        model_.initial_value.assign(model_.servers.size(), std::nullopt);
        model_.initial_message.assign(model_.agents.size(), std::nullopt);
        server_agent_binding_.resize(model_.servers.size());
        server_server_binding_.resize(model_.servers.size());
        agent_server_binding_.resize(model_.agents.size());
    }

    std::optional<std::size_t> find_index(const std::map<std::string, std::size_t>& table, const std::string& n) const {
        auto it = table.find(n);
        if (it == table.end()) return std::nullopt;
        return it->second;
    }

    std::size_t lookup(const std::vector<std::string>& list, const Name& n, const std::string& what,
                       const std::string& owner) const {
        auto it = std::find(list.begin(), list.end(), n.text);
        if (it == list.end())
            raise(ParseErrorKind::unknown_identifier, n.span, "'" + n.text + "' is not a " + what + " of " + owner);
        return static_cast<std::size_t>(it - list.begin());
    }

    // Binds formals positionally (agents first, then servers). Without an
    // argument list every formal binds to the variable of the same name.
    void bind(const TypeDecl& type, const InitItem& it, std::map<std::string, std::size_t>* agents,
              std::map<std::string, std::size_t>* servers) {
        const std::size_t arity = type.agent_formals.size() + type.server_formals.size();
        std::vector<Name> actual;
        if (it.args) {
            actual = *it.args;
            if (actual.size() != arity)
                raise(ParseErrorKind::arity_mismatch, it.head.span,
                      "'" + it.head.text + "' of type '" + type.name.text + "' expects " + std::to_string(arity) +
                          " arguments, got " + std::to_string(actual.size()));
        } else {
            for (const Formal& f : type.agent_formals) actual.push_back({f.name.text, it.head.span});
            for (const Formal& f : type.server_formals) actual.push_back({f.name.text, it.head.span});
        }
        std::size_t k = 0;
        for (const Formal& f : type.agent_formals) {
            const Name& a = actual[k++];
            auto idx = find_index(agent_index_, a.text);
            if (!idx)
                raise(it.args ? ParseErrorKind::unknown_identifier : ParseErrorKind::arity_mismatch, a.span,
                      "'" + a.text + "' is not an agent (binding parameter '" + f.name.text + "')");
            agents->emplace(f.name.text, *idx);
        }
        for (const Formal& f : type.server_formals) {
            const Name& s = actual[k++];
            auto idx = find_index(server_index_, s.text);
            if (!idx)
                raise(it.args ? ParseErrorKind::unknown_identifier : ParseErrorKind::arity_mismatch, s.span,
                      "'" + s.text + "' is not a server (binding parameter '" + f.name.text + "')");
            if (f.type && server_var_type_[*idx]->name.text != f.type->text)
                raise(ParseErrorKind::constraint_violation, s.span,
                      "server '" + s.text + "' is not of type '" + f.type->text + "'");
            servers->emplace(f.name.text, *idx);
        }
    }

    void collect_init() {
        for (const InitItem& it : doc_.init) {
            if (it.tail.size() == 1) {
                auto s = find_index(server_index_, it.head.text);
                if (!s) raise(ParseErrorKind::unknown_identifier, it.head.span, "unknown server '" + it.head.text + "'");
                if (model_.initial_value[*s])
                    raise(ParseErrorKind::duplicate_name, it.head.span, "server '" + it.head.text + "' initialised twice");
                bind(*server_var_type_[*s], it, &server_agent_binding_[*s], &server_server_binding_[*s]);
                model_.initial_value[*s] = lookup(model_.servers[*s].values, it.tail[0], "state", it.head.text);
            } else {
                auto a = find_index(agent_index_, it.head.text);
                if (!a) raise(ParseErrorKind::unknown_identifier, it.head.span, "unknown agent '" + it.head.text + "'");
                if (model_.initial_message[*a])
                    raise(ParseErrorKind::duplicate_name, it.head.span, "agent '" + it.head.text + "' initialised twice");
                if (const TypeDecl* type = agent_var_type_[*a]) {
                    std::map<std::string, std::size_t> unused;
                    bind(*type, it, &unused, &agent_server_binding_[*a]);
                } else if (it.args && !it.args->empty()) {
                    raise(ParseErrorKind::arity_mismatch, it.head.span, "agent '" + it.head.text + "' takes no arguments");
                }
                const Name& srv = it.tail[0];
                std::optional<std::size_t> s;
                if (auto f = agent_server_binding_[*a].find(srv.text); f != agent_server_binding_[*a].end()) s = f->second;
                else s = find_index(server_index_, srv.text);
                if (!s) raise(ParseErrorKind::unknown_identifier, srv.span, "unknown server '" + srv.text + "'");
                model_.initial_message[*a] =
                    Message{*a, *s, lookup(model_.servers[*s].services, it.tail[1], "service", model_.servers[*s].name)};
            }
        }
        for (std::size_t s = 0; s < model_.servers.size(); ++s)
            if (!model_.initial_value[s] && server_var_type_[s]->agent_formals.size() + server_var_type_[s]->server_formals.size() > 0)
                raise(ParseErrorKind::constraint_violation, doc_.server_vars[s].name.span,
                      "server without initial state: " + model_.servers[s].name);
        for (std::size_t a = 0; a < model_.agents.size(); ++a)
            if (!model_.initial_message[a] && agent_var_type_[a] && !agent_var_type_[a]->server_formals.empty())
                raise(ParseErrorKind::constraint_violation, doc_.agent_vars[a].name.span,
                      "agent without initial message: " + model_.agents[a]);
    }

    std::size_t instances_of(const TypeDecl& t) const {
        const auto& vars = t.is_agent ? doc_.agent_vars : doc_.server_vars;
        return static_cast<std::size_t>(
            std::count_if(vars.begin(), vars.end(), [&](const VarDecl& v) { return v.type.text == t.name.text; }));
    }

    void expand_actions() {
        if (view_ == View::server) {
            for (std::size_t s = 0; s < model_.servers.size(); ++s) {
                const TypeDecl& t = *server_var_type_[s];
                const bool single = instances_of(t) == 1;
                auto agent_of = [&](const Name& n) {
                    auto f = server_agent_binding_[s].find(n.text);
                    if (f == server_agent_binding_[s].end())
                        raise(ParseErrorKind::unknown_identifier, n.span,
                              "'" + n.text + "' is not an agent parameter of server type '" + t.name.text + "'");
                    return f->second;
                };
                auto server_of = [&](const Name& n) {
                    if (n.text == t.name.text) return s;
                    auto f = server_server_binding_[s].find(n.text);
                    if (f == server_server_binding_[s].end())
                        raise(ParseErrorKind::unknown_identifier, n.span,
                              "'" + n.text + "' is neither server type '" + t.name.text + "' nor one of its server parameters");
                    return f->second;
                };
                for (const RawAction& ra : t.actions)
                    add_action(ra, agent_of, server_of, single ? "" : model_.servers[s].name + "_");
            }
        } else {
            for (std::size_t a = 0; a < model_.agents.size(); ++a) {
                const TypeDecl& t = *agent_var_type_[a];
                const bool single = instances_of(t) == 1;
                auto agent_of = [&](const Name& n) {
                    if (n.text != t.name.text)
                        raise(ParseErrorKind::unknown_identifier, n.span,
                              "'" + n.text + "' is not agent type '" + t.name.text + "'");
                    return a;
                };
                auto server_of = [&](const Name& n) {
                    auto f = agent_server_binding_[a].find(n.text);
                    if (f == agent_server_binding_[a].end())
                        raise(ParseErrorKind::unknown_identifier, n.span,
                              "'" + n.text + "' is not a server parameter of agent type '" + t.name.text + "'");
                    return f->second;
                };
                for (const RawAction& ra : t.actions)
                    add_action(ra, agent_of, server_of, single ? "" : model_.agents[a] + "_");
            }
        }
    }

    template <class AgentOf, class ServerOf>
    void add_action(const RawAction& ra, AgentOf&& agent_of, ServerOf&& server_of, const std::string& prefix) {
        auto message = [&](const RawMessage& rm) {
            Message m;
            m.agent = agent_of(rm.agent);
            m.server = server_of(rm.server);
            m.service = lookup(model_.servers[m.server].services, rm.service, "service", model_.servers[m.server].name);
            return m;
        };
        auto state = [&](const RawState& rs) {
            ServerState p;
            p.server = server_of(rs.server);
            p.value = lookup(model_.servers[p.server].values, rs.value, "state", model_.servers[p.server].name);
            return p;
        };
        Action a;
        a.in_message = message(ra.in);
        a.in_state = state(ra.in_state);
        if (ra.out) a.out_message = message(*ra.out);
        a.out_state = state(ra.out_state);
        if (ra.label) a.name = prefix + ra.label->text;
        model_.actions.push_back(std::move(a));
        action_spans_.push_back(ra.span);
    }

    ParseResult finish() {
        // Canonical action order, carrying spans along.
        std::vector<std::size_t> order(model_.actions.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return detail::action_key(model_.actions[x]) < detail::action_key(model_.actions[y]);
        });
        std::vector<Action> actions;
        std::vector<SourceSpan> spans;
        for (std::size_t i : order) {
            actions.push_back(model_.actions[i]);
            spans.push_back(action_spans_[i]);
        }
        model_.actions = std::move(actions);

        const auto diags = validate_model(model_);
        if (!diags.empty()) {
            const Diagnostic& d = diags.front();
            SourceSpan span = doc_.system.span;
            if (d.action) span = spans[*d.action];
            else if (d.message.rfind("server without", 0) == 0 || d.message.rfind("agent without", 0) == 0) span = doc_.init_span;
            raise(ParseErrorKind::constraint_violation, span, d.message);
        }
        return {std::move(model_), view_};
    }
};

} // namespace parse_detail

/// Parses either view; the result is validated and template-free.
inline ParseResult parse(std::string_view source) {
    parse_detail::Parser p(parse_detail::lex(source));
    const parse_detail::Document doc = p.document();
    return parse_detail::Elaborator(doc).run();
}

// ---------------------------------------------------------------------------
// Rendering

namespace render_detail {

inline std::string join(const std::vector<std::string>& items, const std::string& sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

inline std::string action_line(const SystemModel& m, const Action& a) {
    return (a.name.empty() ? "" : a.name + ": ") + action_text(m, a);
}

inline void action_section(std::ostringstream& out, const SystemModel& m, const std::vector<std::size_t>& ids) {
    out << "  actions {\n";
    for (std::size_t id : ids) out << "    " << action_line(m, m.actions[id]) << ",\n";
    out << "  }";
}

inline void server_header(std::ostringstream& out, const Server& s) {
    out << "  services {" << join(s.services) << "},\n";
    out << "  states {" << join(s.values) << "}";
}

} // namespace render_detail

/// Emits a specification in the requested view. Every server (agent) gets
/// its own type named after it, parameterised by exactly what its actions use.
inline std::string render(const SystemModel& m, View view) {
    using namespace render_detail;
    std::ostringstream out;
    out << "system " << (m.name.empty() ? "model" : m.name) << ";\n\n";

    std::vector<std::string> server_inits, agent_inits;
    if (view == View::server) {
        for (std::size_t s = 0; s < m.servers.size(); ++s) {
            std::vector<std::size_t> ids;
            std::vector<bool> uses_agent(m.agents.size()), uses_server(m.servers.size());
            for (std::size_t i = 0; i < m.actions.size(); ++i) {
                const Action& a = m.actions[i];
                if (a.in_state.server != s) continue;
                ids.push_back(i);
                uses_agent[a.in_message.agent] = true;
                uses_server[a.in_message.server] = true;
                uses_server[a.out_state.server] = true;
                if (a.out_message) uses_server[a.out_message->server] = true;
            }
            uses_server[s] = false;
            std::vector<std::string> agents, servers;
            for (std::size_t a = 0; a < m.agents.size(); ++a)
                if (uses_agent[a]) agents.push_back(m.agents[a]);
            for (std::size_t o = 0; o < m.servers.size(); ++o)
                if (uses_server[o]) servers.push_back(m.servers[o].name);

            out << "server: " << m.servers[s].name;
            std::vector<std::string> groups;
            if (!agents.empty()) groups.push_back("agents " + join(agents));
            if (!servers.empty()) groups.push_back("servers " + join(servers));
            if (!groups.empty()) out << " (" << join(groups, "; ") << ")";
            out << ",\n";
            server_header(out, m.servers[s]);
            out << ",\n";
            action_section(out, m, ids);
            out << ";\n\n";

            std::vector<std::string> args = agents;
            args.insert(args.end(), servers.begin(), servers.end());
            std::string head = m.servers[s].name;
            if (!args.empty()) head += "(" + join(args) + ")";
            server_inits.push_back(head + "." + m.servers[s].values.at(m.initial_value.at(s).value_or(0)));
        }
        std::vector<std::string> names;
        for (const auto& s : m.servers) names.push_back(s.name);
        out << "servers " << join(names) << ";\n";
        out << "agents " << join(m.agents) << ";\n\n";
        for (std::size_t a = 0; a < m.agents.size(); ++a)
            if (const auto& msg = m.initial_message.at(a)) agent_inits.push_back(message_text(m, *msg));
        out << "init -> {\n";
        for (const auto& l : server_inits) out << "  " << l << ",\n";
        for (const auto& l : agent_inits) out << "  " << l << ",\n";
        out << "}.\n";
    } else {
        for (const auto& s : m.servers) {
            out << "server: " << s.name << ",\n";
            server_header(out, s);
            out << ";\n\n";
        }
        for (std::size_t a = 0; a < m.agents.size(); ++a) {
            std::vector<std::size_t> ids;
            std::vector<bool> uses_server(m.servers.size());
            for (std::size_t i = 0; i < m.actions.size(); ++i) {
                const Action& act = m.actions[i];
                if (act.in_message.agent != a) continue;
                ids.push_back(i);
                uses_server[act.in_message.server] = true;
                uses_server[act.in_state.server] = true;
                uses_server[act.out_state.server] = true;
                if (act.out_message) uses_server[act.out_message->server] = true;
            }
            std::vector<std::string> servers;
            for (std::size_t o = 0; o < m.servers.size(); ++o)
                if (uses_server[o]) servers.push_back(m.servers[o].name);
            out << "agent: " << m.agents[a];
            if (!servers.empty()) out << " (servers " << join(servers) << ")";
            out << ",\n";
            action_section(out, m, ids);
            out << ";\n\n";

            std::string head = m.agents[a];
            if (!servers.empty()) head += "(" + join(servers) + ")";
            if (const auto& msg = m.initial_message.at(a))
                agent_inits.push_back(head + "." + m.servers[msg->server].name + "." +
                                      m.servers[msg->server].services[msg->service]);
        }
        std::vector<std::string> names;
        for (const auto& s : m.servers) names.push_back(s.name);
        out << "agents " << join(m.agents) << ";\n";
        out << "servers " << join(names) << ";\n\n";
        for (std::size_t s = 0; s < m.servers.size(); ++s)
            server_inits.push_back(m.servers[s].name + "." + m.servers[s].values.at(m.initial_value.at(s).value_or(0)));
        out << "init -> {\n";
        for (const auto& l : agent_inits) out << "  " << l << ",\n";
        for (const auto& l : server_inits) out << "  " << l << ",\n";
        out << "}.\n";
    }
    return out.str();
}

} // namespace imds
