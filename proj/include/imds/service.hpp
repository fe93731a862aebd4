#pragma once

// Local HTTP JSON API over loaded models and simulator sessions.
// `SimService::handle` is the whole router and needs no socket; `attach`
// binds it to an httplib server.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "imds/analysis.hpp"
#include "imds/automata.hpp"
#include "imds/lts.hpp"
#include "imds/parser.hpp"
#include "imds/serialize.hpp"
#include "imds/simulator.hpp"

namespace imds {

struct HttpResponse {
    int status = 200;
    std::string body;
};

/// Immutable per-model data shared by all sessions.
struct LoadedModel {
    std::string id;
    std::shared_ptr<const SystemModel> model;
    View source_view = View::server;
    std::optional<Lts> lts;
    std::optional<Report> report;
    /// Set when the LTS could not be built within limits.
    std::string analysis_error;
};

class SimService {
public:
    explicit SimService(Limits limits = {}) : limits_(limits) {}

    void add_model(const std::string& id, SystemModel model, View view = View::server) {
        auto lm = std::make_shared<LoadedModel>();
        lm->id = id;
        lm->model = std::make_shared<const SystemModel>(std::move(model));
        lm->source_view = view;
        try {
            lm->lts = build_lts(*lm->model, limits_);
            lm->report = analyze(*lm->lts, *lm->model);
        } catch (const LimitExceeded& e) {
            lm->analysis_error = e.what();
        }
        models_[id] = std::move(lm);
    }

    /// Loads every `*.imds` file directly inside `dir`; the id is the file stem.
    /// Throws ParseError / std::runtime_error naming the offending file.
    void load_directory(const std::filesystem::path& dir) {
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".imds") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) load_file(f);
    }

    void load_file(const std::filesystem::path& file) {
        std::ifstream in(file);
        if (!in) throw Error("cannot read " + file.string());
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            ParseResult r = parse(ss.str());
            add_model(file.stem().string(), std::move(r.model), r.view);
        } catch (const ParseError& e) {
            throw Error(file.string() + ":" + e.what());
        }
    }

    std::vector<std::string> model_ids() const {
        std::vector<std::string> out;
        for (const auto& [id, _] : models_) out.push_back(id);
        return out;
    }

    HttpResponse handle(const std::string& method, const std::string& path, const std::string& body) {
        const auto parts = split(path);
        try {
            if (parts.size() == 1 && parts[0] == "models" && method == "GET") return list_models();
            if (parts.size() == 2 && parts[0] == "models" && method == "GET") return get_model(parts[1]);
            if (parts.size() == 1 && parts[0] == "sessions" && method == "POST") return create_session(body);
            if (parts.size() >= 2 && parts[0] == "sessions") return session_route(method, parts, body);
            return error(404, "not_found", "no route for " + method + " " + path);
        } catch (const nlohmann::json::exception& e) {
            return error(400, "malformed_body", e.what());
        } catch (const std::invalid_argument& e) {
            return error(400, "malformed_body", e.what());
        }
    }

private:
    struct SessionSlot {
        std::mutex mutex;
        std::shared_ptr<const LoadedModel> source;
        Session session;
    };

    static std::vector<std::string> split(const std::string& path) {
        std::vector<std::string> out;
        std::string cur;
        const std::string p = path.substr(0, path.find('?'));
        for (char c : p) {
            if (c == '/') {
                if (!cur.empty()) out.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(std::move(cur));
        return out;
    }

    static HttpResponse json_response(int status, const Json& j) { return {status, j.dump()}; }

    static HttpResponse error(int status, const std::string& kind, const std::string& message) {
        return json_response(status, {{"schema_version", schema_version}, {"error", kind}, {"message", message}});
    }

    static Json parse_body(const std::string& body) {
        if (body.empty()) return Json::object();
        Json j = Json::parse(body);
        if (!j.is_object()) throw std::invalid_argument("request body must be a JSON object");
        return j;
    }

    HttpResponse list_models() const {
        Json list = Json::array();
        for (const auto& [id, lm] : models_) {
            Json entry = {{"id", id},
                          {"name", lm->model->name},
                          {"view", view_name(lm->source_view)},
                          {"servers", lm->model->servers.size()},
                          {"agents", lm->model->agents.size()},
                          {"actions", lm->model->actions.size()}};
            if (lm->report) entry["any_deadlock"] = lm->report->any_deadlock();
            list.push_back(std::move(entry));
        }
        return json_response(200, {{"schema_version", schema_version}, {"models", list}});
    }

    HttpResponse get_model(const std::string& id) const {
        auto it = models_.find(id);
        if (it == models_.end()) return error(404, "unknown_model", "unknown model " + id);
        const LoadedModel& lm = *it->second;
        Json out = {{"schema_version", schema_version}, {"id", id}};
        out["model"] = model_json(*lm.model);
        out["automata"] = automata_json(*lm.model, to_sda3(*lm.model), to_ada3(*lm.model));
        if (lm.report) out["report"] = report_json(*lm.model, *lm.lts, *lm.report);
        else out["report"] = nullptr;
        if (!lm.analysis_error.empty()) out["analysis_error"] = lm.analysis_error;
        return json_response(200, out);
    }

    HttpResponse create_session(const std::string& body) {
        const Json req = parse_body(body);
        if (!req.contains("model") || !req["model"].is_string()) return error(400, "malformed_body", "missing model");
        const std::string model = req["model"].get<std::string>();
        const std::string view = req.value("view", std::string("sda3"));
        if (view != "sda3" && view != "ada3") return error(400, "malformed_body", "view must be sda3 or ada3");
        auto it = models_.find(model);
        if (it == models_.end()) return error(404, "unknown_model", "unknown model " + model);
        auto slot = std::make_shared<SessionSlot>();
        slot->source = it->second;
        slot->session = new_session(it->second->model, view == "sda3" ? AutomataKind::sda3 : AutomataKind::ada3);
        std::string id;
        {
            std::lock_guard lock(registry_mutex_);
            id = "s" + std::to_string(++next_session_);
            sessions_[id] = slot;
        }
        std::lock_guard lock(slot->mutex);
        return json_response(201, session_json(slot->session, id));
    }

    std::shared_ptr<SessionSlot> find_session(const std::string& id) {
        std::lock_guard lock(registry_mutex_);
        auto it = sessions_.find(id);
        return it == sessions_.end() ? nullptr : it->second;
    }

    static std::optional<std::size_t> resolve_action(const SystemModel& m, const Json& v) {
        if (v.is_number_unsigned()) {
            const auto id = v.get<std::size_t>();
            if (id < m.actions.size()) return id;
            return std::nullopt;
        }
        if (v.is_string()) return find_action(m, v.get<std::string>());
        return std::nullopt;
    }

    HttpResponse session_route(const std::string& method, const std::vector<std::string>& parts, const std::string& body) {
        const std::string& id = parts[1];
        if (parts.size() == 2 && method == "DELETE") {
            std::lock_guard lock(registry_mutex_);
            if (!sessions_.erase(id)) return error(404, "unknown_session", "unknown session " + id);
            return {204, ""};
        }
        auto slot = find_session(id);
        if (!slot) return error(404, "unknown_session", "unknown session " + id);
        std::lock_guard lock(slot->mutex);
        Session& s = slot->session;
        const SystemModel& m = *s.model;

        if (parts.size() == 2 && method == "GET") return json_response(200, session_json(s, id));
        if (parts.size() != 3 || method != "POST") return error(404, "not_found", "no such session operation");
        const std::string& op = parts[2];
        const Json req = parse_body(body);
        try {
            if (op == "step") {
                const Json* arg = req.contains("transition") ? &req["transition"]
                                  : req.contains("action")   ? &req["action"]
                                                             : nullptr;
                if (!arg) return error(400, "malformed_body", "missing transition");
                const auto action = resolve_action(m, *arg);
                if (!action) return error(400, "unknown_transition", "unknown transition " + arg->dump());
                const StepResult r = step(s, *action);
                Json out = session_json(s, id);
                out["focus"] = automaton_id(m, s.view, r.focus);
                return json_response(200, out);
            }
            if (op == "advance") {
                const StepResult r = advance(s);
                Json out = session_json(s, id);
                out["focus"] = automaton_id(m, s.view, r.focus);
                return json_response(200, out);
            }
            if (op == "undo") {
                undo(s);
                return json_response(200, session_json(s, id));
            }
            if (op == "reset") {
                reset(s);
                return json_response(200, session_json(s, id));
            }
            if (op == "trace") {
                std::vector<std::size_t> trace;
                if (req.contains("verdict")) {
                    const std::string vid = req["verdict"].get<std::string>();
                    if (!slot->source->report) return error(409, "no_report", slot->source->analysis_error);
                    const Verdict* v = slot->source->report->find(vid);
                    if (!v) return error(404, "unknown_verdict", "unknown verdict " + vid);
                    if (!v->witness) return error(409, "no_witness", "verdict " + vid + " has no witness");
                    trace = v->witness->labels;
                } else if (req.contains("actions") && req["actions"].is_array()) {
                    for (const Json& a : req["actions"]) {
                        const auto action = resolve_action(m, a);
                        if (!action) return error(400, "unknown_transition", "unknown transition " + a.dump());
                        trace.push_back(*action);
                    }
                } else {
                    return error(400, "malformed_body", "expected verdict or actions");
                }
                load_trace(s, trace);
                return json_response(200, session_json(s, id));
            }
        } catch (const TransitionNotEnabled& e) {
            return error(409, "transition_not_enabled", e.what());
        } catch (const TraceMismatch& e) {
            Json j = {{"schema_version", schema_version}, {"error", "trace_mismatch"}, {"message", e.what()},
                      {"index", e.index()}};
            return json_response(409, j);
        } catch (const NothingToUndo& e) {
            return error(409, "nothing_to_undo", e.what());
        } catch (const TraceExhausted& e) {
            return error(409, "trace_exhausted", e.what());
        }
        return error(404, "not_found", "no such session operation: " + op);
    }

    Limits limits_;
    std::map<std::string, std::shared_ptr<const LoadedModel>> models_;
    std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
    std::uint64_t next_session_ = 0;
};

/// Registers the router on every method and path; static files from
/// `ui_dir` are served at `/` when given.
inline void attach(httplib::Server& server, SimService& service, const std::string& ui_dir = {}) {
    if (!ui_dir.empty()) server.set_mount_point("/", ui_dir);
    auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
        const HttpResponse r = service.handle(req.method, req.path, req.body);
        res.status = r.status;
        if (!r.body.empty()) res.set_content(r.body, "application/json");
    };
    server.Get(R"(/(models|sessions)(/.*)?)", handler);
    server.Post(R"(/(models|sessions)(/.*)?)", handler);
    server.Delete(R"(/(models|sessions)(/.*)?)", handler);
}

} // namespace imds
