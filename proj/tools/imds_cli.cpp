#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imds/imds.hpp"
#include "imds/serialize.hpp"
#include "imds/service.hpp"

namespace fs = std::filesystem;
using namespace imds;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_limit = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

/// Unreadable or invalid input; exits with exit_usage.
struct InputError : Error {
    using Error::Error;
};

ParseResult load(const std::string& path) {
    try {
        return parse(read_file(path));
    } catch (const ParseError& e) {
        throw InputError(path + ":" + e.what());
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

Limits limits_from(std::size_t max_nodes, std::size_t max_edges) {
    Limits l = Limits::from_env();
    if (max_nodes) l.max_nodes = max_nodes;
    if (max_edges) l.max_edges = max_edges;
    return l;
}

/// One label per line; `#` starts a comment.
std::vector<std::size_t> read_trace(const SystemModel& m, const std::string& path) {
    std::vector<std::size_t> out;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        for (std::size_t h = line.find('#'); h != std::string::npos; h = line.find('#', h + 1))
            if (h + 1 == line.size() || !std::isdigit(static_cast<unsigned char>(line[h + 1]))) {
                line.resize(h);
                break;
            }
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
        auto id = find_action(m, line);
        if (!id) throw Error(path + ":" + std::to_string(lineno) + ": unknown action " + line);
        out.push_back(*id);
    }
    return out;
}

void print_position(std::ostream& out, const Session& s) {
    const SystemModel& m = *s.model;
    const auto listed = listed_transitions(s);
    for (std::size_t i = 0; i < automaton_count(s); ++i) {
        if (s.view == AutomataKind::sda3) {
            out << "  " << m.servers[i].name << " @ " << m.servers[i].values[s.sda_position.nodes[i]] << "  inputs {";
            for (std::size_t k = 0; k < s.sda_position.inputs[i].size(); ++k)
                out << (k ? ", " : "") << message_text(m, s.sda_position.inputs[i][k]);
            out << "}\n";
        } else {
            const auto& node = s.ada_position.nodes[i];
            out << "  " << m.agents[i] << " @ " << (node ? ada_node_label(m, s.ada[i], *node) : "t (terminated)") << "\n";
        }
        for (const auto& [lt, on] : listed) {
            if (lt.automaton != i) continue;
            out << "      " << (on ? "[+] " : "[ ] ") << action_label(m, lt.action) << "\n";
        }
    }
    if (s.view == AutomataKind::ada3) {
        out << "  vector (";
        for (std::size_t k = 0; k < s.ada_position.vector.size(); ++k)
            out << (k ? ", " : "") << state_text(m, {k, s.ada_position.vector[k]});
        out << ")\n";
    }
}

int cmd_check(const std::string& file) {
    try {
        const ParseResult r = load(file);
        std::cout << file << ": ok (" << view_name(r.view) << " view, " << r.model.servers.size() << " servers, "
                  << r.model.agents.size() << " agents, " << r.model.actions.size() << " actions)\n";
        return 0;
    } catch (const InputError& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }
}

int cmd_xcheck(const SystemModel& m, const Limits& limits) {
    const Lts lts = build_lts(m, limits);
    const PetriNet net = to_petri(m);
    const MarkingGraph mg = marking_graph(net, limits);
    const auto sda = to_sda3(m);
    const auto ada = to_ada3(m);
    const SdaGraph sg = global_graph(sda, limits);
    const AdaGraph ag = global_graph(ada, m, limits);
    const IsoResult pn = check_iso_with_lts(m, net, mg, lts);
    const IsoResult s3 = check_iso_with_lts(m, sda, sg, lts);
    const IsoResult a3 = check_iso_with_lts(m, ada, ag, lts);
    auto counts = [](const auto& g) { return std::to_string(g.node_count()) + "/" + std::to_string(g.edge_count()); };
    const bool ok = pn.ok && s3.ok && a3.ok;
    std::cout << "LTS=" << counts(lts) << ", PN=" << counts(mg) << ", SDA3=" << counts(sg) << ", ADA3=" << counts(ag)
              << ", ISO: " << (ok ? "OK" : "FAIL") << "\n";
    if (!pn.ok) std::cout << "  petri: " << pn.mismatch << "\n";
    if (!s3.ok) std::cout << "  sda3: " << s3.mismatch << "\n";
    if (!a3.ok) std::cout << "  ada3: " << a3.mismatch << "\n";
    return ok ? 0 : 1;
}

std::string place_set_text(const PetriNet& net, const PlaceSet& d) {
    std::string s = "{";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + net.places[d[i]].name;
    return s + "}";
}

int cmd_simulate(const SystemModel& model, AutomataKind view, const std::string& trace_file, std::size_t walk,
                 std::uint64_t seed) {
    Session s = new_session(std::make_shared<const SystemModel>(model), view);
    const SystemModel& m = *s.model;
    if (!trace_file.empty()) {
        load_trace(s, read_trace(m, trace_file));
        std::cout << "initial\n";
        print_position(std::cout, s);
        while (s.cursor < s.pinned->size()) {
            const StepResult r = advance(s);
            std::cout << "step " << s.history.size() << ": " << action_label(m, r.action) << "\n";
            print_position(std::cout, s);
        }
        std::cout << "enabled after trace: " << enabled(s).size() << "\n";
        return 0;
    }
    if (walk > 0) {
        std::mt19937_64 rng(seed);
        std::cout << "initial\n";
        print_position(std::cout, s);
        for (std::size_t i = 0; i < walk; ++i) {
            const auto on = enabled(s);
            if (on.empty()) {
                std::cout << "stuck after " << i << " steps\n";
                break;
            }
            std::uniform_int_distribution<std::size_t> pick(0, on.size() - 1);
            const std::size_t a = on[pick(rng)];
            step(s, a);
            std::cout << "step " << i + 1 << ": " << action_label(m, a) << "\n";
        }
        print_position(std::cout, s);
        return 0;
    }
    std::cout << "commands: <action label> | undo | reset | quit\n";
    print_position(std::cout, s);
    std::string line;
    while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
        if (line == "quit" || line == "q") break;
        try {
            if (line == "undo") undo(s);
            else if (line == "reset") reset(s);
            else if (auto id = find_action(m, line)) step(s, *id);
            else {
                std::cout << "unknown action " << line << "\n";
                continue;
            }
        } catch (const Error& e) {
            std::cout << e.what() << "\n";
            continue;
        }
        print_position(std::cout, s);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"IMDS model checker and simulator"};
    app.require_subcommand(1);

    std::string file, out, dot, json, andl, view = "sda3", to, trace, ui, bind = "127.0.0.1";
    std::size_t max_nodes = 0, max_edges = 0, walk = 0;
    std::uint64_t seed = 1;
    int port = 8080;
    bool dump = false, siphons = false, traps = false, invariants = false, report = false, show_t = false;

    auto* check = app.add_subcommand("check", "parse and validate a model");
    check->add_option("file", file)->required();

    auto* convert = app.add_subcommand("convert", "render a model in the server or agent view");
    convert->add_option("file", file)->required();
    convert->add_option("--to", to)->required()->check(CLI::IsMember({"server", "agent"}));
    convert->add_option("-o,--output", out);

    auto* lts_cmd = app.add_subcommand("lts", "build the labeled transition system");
    lts_cmd->add_option("file", file)->required();
    lts_cmd->add_option("--dot", dot);
    lts_cmd->add_flag("--dump", dump);

    auto* verify = app.add_subcommand("verify", "deadlock and termination report");
    verify->add_option("file", file)->required();
    verify->add_option("--json", json);

    auto* petri = app.add_subcommand("petri", "Petri net export and structural analysis");
    petri->add_option("file", file)->required();
    petri->add_option("--andl", andl);
    petri->add_option("--dot", dot);
    petri->add_flag("--siphons", siphons);
    petri->add_flag("--traps", traps);
    petri->add_flag("--invariants", invariants);
    petri->add_flag("--report", report);

    auto* automata = app.add_subcommand("automata", "server or agent automata");
    automata->add_option("file", file)->required();
    automata->add_option("--view", view)->check(CLI::IsMember({"sda3", "ada3"}));
    automata->add_option("--dot", dot, "output directory");
    automata->add_option("--json", json);
    automata->add_flag("--show-terminal", show_t);

    auto* xcheck = app.add_subcommand("xcheck", "cross-check LTS, Petri net and both automata views");
    xcheck->add_option("file", file)->required();

    auto* simulate = app.add_subcommand("simulate", "step through the automata");
    simulate->add_option("file", file)->required();
    simulate->add_option("--view", view)->check(CLI::IsMember({"sda3", "ada3"}));
    simulate->add_option("--trace", trace);
    simulate->add_option("--random-walk", walk);
    simulate->add_option("--seed", seed);

    auto* serve = app.add_subcommand("serve", "HTTP JSON API for simulation sessions");
    serve->add_option("dir", file)->required();
    serve->add_option("--bind", bind);
    serve->add_option("--port", port);
    serve->add_option("--ui", ui);

    for (auto* sub : {lts_cmd, verify, petri, automata, xcheck, simulate, serve}) {
        sub->add_option("--max-nodes", max_nodes);
        sub->add_option("--max-edges", max_edges);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    const Limits limits = limits_from(max_nodes, max_edges);
    try {
        if (*check) return cmd_check(file);
        if (*serve) {
            SimService service(limits);
            service.load_directory(file);
            httplib::Server server;
            attach(server, service, ui);
            std::cout << "serving " << service.model_ids().size() << " models on http://" << bind << ":" << port << "\n"
                      << std::flush;
            if (!server.listen(bind, port)) {
                std::cerr << "cannot bind " << bind << ":" << port << "\n";
                return 1;
            }
            return 0;
        }

        const ParseResult parsed = load(file);
        const SystemModel& m = parsed.model;

        if (*convert) {
            const std::string text = render(m, to == "server" ? View::server : View::agent);
            if (out.empty()) std::cout << text;
            else write_file(out, text);
            return 0;
        }
        if (*lts_cmd) {
            const Lts lts = build_lts(m, limits);
            std::cout << "nodes=" << lts.node_count() << " edges=" << lts.edge_count() << "\n";
            if (dump) std::cout << lts_dump(m, lts);
            if (!dot.empty()) write_file(dot, lts_dot(m, lts));
            return 0;
        }
        if (*verify) {
            const Lts lts = build_lts(m, limits);
            const Report r = analyze(lts, m);
            std::cout << report_text(m, lts, r);
            if (!json.empty()) write_file(json, report_json(m, lts, r).dump(2) + "\n");
            return r.any_deadlock() ? 1 : 0;
        }
        if (*petri) {
            const PetriNet net = to_petri(m);
            std::cout << "places=" << net.places.size() << " transitions=" << net.transitions.size() << "\n";
            if (!andl.empty()) write_file(andl, to_andl(net));
            if (!dot.empty()) write_file(dot, petri_dot(net));
            if (siphons) {
                const MarkingGraph mg = marking_graph(net, limits);
                for (const PlaceSet& d : minimal_siphons(net)) {
                    const auto w = siphon_emptiable(d, mg);
                    std::cout << "siphon " << place_set_text(net, d)
                              << (w ? " emptiable at marking " + std::to_string(*w) : " never emptied") << "\n";
                }
            }
            if (traps)
                for (const PlaceSet& d : minimal_traps(net)) std::cout << "trap " << place_set_text(net, d) << "\n";
            if (invariants) {
                for (const auto& x : p_invariants(net)) {
                    std::cout << "invariant";
                    for (std::size_t p = 0; p < x.size(); ++p)
                        if (x[p]) std::cout << " " << (x[p] == 1 ? "" : std::to_string(x[p]) + "*") << net.places[p].name;
                    std::cout << "\n";
                }
            }
            if (report) {
                const MarkingGraph mg = marking_graph(net, limits);
                const StructuralReport sr = structural_report(net, mg);
                std::cout << "markings=" << mg.node_count() << " firings=" << mg.edge_count()
                          << " components=" << sr.components << " dead_transitions=" << sr.dead_transitions.size()
                          << " safe=" << (sr.safe ? "yes" : "no") << "\n";
                for (std::size_t t : sr.dead_transitions) std::cout << "dead " << net.transitions[t].name << "\n";
            }
            return 0;
        }
        if (*automata) {
            const auto sda = to_sda3(m);
            const auto ada = to_ada3(m);
            const auto files = view == "sda3" ? export_dot(m, sda) : export_dot(m, ada, DotOptions{show_t});
            std::cout << files.size() - (files.empty() ? 0 : 1) << " " << view << " automata\n";
            if (!dot.empty())
                for (const DotFile& f : files) write_file(fs::path(dot) / f.name, f.text);
            if (!json.empty()) write_file(json, automata_json(m, sda, ada).dump(2) + "\n");
            return 0;
        }
        if (*xcheck) return cmd_xcheck(m, limits);
        if (*simulate)
            return cmd_simulate(m, view == "sda3" ? AutomataKind::sda3 : AutomataKind::ada3, trace, walk, seed);
    } catch (const LimitExceeded& e) {
        std::cerr << e.what() << "\n";
        return exit_limit;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_usage;
}
