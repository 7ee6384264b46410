#include "pareto/http.hpp"

#include <httplib.h>

#include "json.hpp"
#include "pareto/service.hpp"

namespace pareto {

using nlohmann::json;

struct Server::Impl {
    ServerOptions options;
    SessionRegistry registry;
    httplib::Server http;

    explicit Impl(ServerOptions o) : options(std::move(o)), registry(options.persist_dir) { routes(); }

    static void send_error(httplib::Response& res, const Error& e) {
        res.status = http_status(e.code());
        res.set_content(json{{"error", to_string(e.code())}, {"message", e.what()}}.dump(), "application/json");
    }

    // Runs fn and maps pareto::Error to a JSON error body.
    template <typename Fn>
    static void guarded(httplib::Response& res, Fn&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(json{{"error", "Internal"}, {"message", e.what()}}.dump(), "application/json");
        }
    }

    void routes() {
        http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
        http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
            res.status = 204;
        });

        http.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const std::string id = registry.create(parse_session_spec(req.body));
                res.status = 201;
                res.set_header("Location", "/sessions/" + id);
                res.set_content(registry.with(id, [](Session& s) { return state_json(s); }), "application/json");
            });
        });

        http.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(json{{"sessions", registry.ids()}}.dump(), "application/json");
        });

        auto get = [this](const char* suffix, std::string (*view)(const Session&), const char* type) {
            http.Get(std::string(R"(/sessions/([^/]+)/)") + suffix,
                     [this, view, type](const httplib::Request& req, httplib::Response& res) {
                         guarded(res, [&] {
                             res.set_content(registry.with(req.matches[1], [&](Session& s) { return view(s); }), type);
                         });
                     });
        };
        get("question", &question_json, "application/json");
        get("state", &state_json, "application/json");
        get("result", &result_json, "application/json");
        get("dominance\\.dot", static_cast<std::string (*)(const Session&)>(&dominance_dot), "text/vnd.graphviz");

        http.Post(R"(/sessions/([^/]+)/votes)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                json body;
                try {
                    body = json::parse(req.body);
                } catch (const json::exception&) {
                    throw Error(ErrorCode::InvalidArgument, "request body is not JSON");
                }
                std::uint64_t qid = 0;
                std::optional<Vote> vote;
                std::string respondent;
                try {
                    qid = body.at("question_id").get<std::uint64_t>();
                    vote = parse_vote(body.at("vote").get<std::string>());
                    respondent = body.value("respondent", "");
                } catch (const json::exception& e) {
                    throw Error(ErrorCode::InvalidArgument, e.what());
                }
                if (!vote) throw Error(ErrorCode::InvalidArgument, "vote must be prefer_x, prefer_y, indifferent or skip");
                const std::string out = registry.with(req.matches[1], [&](Session& s) {
                    const VoteReceipt r = s.vote(qid, *vote, respondent);
                    json j{{"finalized", r.finalized}};
                    j["aggregated"] = r.aggregated ? json(to_string(*r.aggregated)) : json(nullptr);
                    j["kept"] = r.kept ? json(to_string(*r.kept)) : json(nullptr);
                    j["state"] = json::parse(state_json(s));
                    return j.dump();
                });
                res.set_content(out, "application/json");
            });
        });

        if (!options.static_dir.empty()) http.set_mount_point("/", options.static_dir);
    }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
Server::~Server() = default;

int Server::bind() {
    auto& o = impl_->options;
    int port = o.port;
    if (port == 0) {
        port = impl_->http.bind_to_any_port(o.host);
    } else if (!impl_->http.bind_to_port(o.host, port)) {
        port = -1;
    }
    if (port <= 0) throw Error(ErrorCode::Io, "cannot bind " + o.host + ":" + std::to_string(o.port));
    o.port = port;
    return port;
}

void Server::listen() { impl_->http.listen_after_bind(); }
void Server::stop() { impl_->http.stop(); }

}  // namespace pareto
