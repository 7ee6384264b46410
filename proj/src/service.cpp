#include "pareto/service.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pareto/dataset.hpp"

namespace pareto {

using nlohmann::json;

namespace {

constexpr int kSnapshotVersion = 1;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Universe checked_universe(const SessionSpec& spec) {
    Universe u(spec.objects, spec.criteria);
    try {
        spec.cfg.validate();
        spec.strategy.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidSpec, e.what());
    }
    return u;
}

}  // namespace

std::string_view to_string(SessionStatus s) { return s == SessionStatus::Active ? "active" : "terminal"; }

Session::Session(std::string id, SessionSpec spec)
    : id_(std::move(id)), spec_(std::move(spec)), engine_(checked_universe(spec_), spec_.strategy, spec_.seed) {
    advance();
}

Session::Session(std::string id, SessionSpec spec, int)
    : id_(std::move(id)), spec_(std::move(spec)), engine_(checked_universe(spec_), spec_.strategy, spec_.seed) {}

SessionStatus Session::status() const { return current_ ? SessionStatus::Active : SessionStatus::Terminal; }

void Session::advance() {
    // Live sessions stop at O? empty for every strategy, brute force included.
    current_.reset();
    if (!is_terminal(engine_.state().partition())) current_ = engine_.next_question();
    if (current_) ++question_id_;
}

VoteReceipt Session::vote(std::uint64_t question_id, Vote v, const std::string& respondent) {
    if (!current_) throw Error(ErrorCode::SessionTerminal, "session " + id_ + " is terminal");
    if (question_id != question_id_)
        throw Error(ErrorCode::StaleQuestion, "question " + std::to_string(question_id) + " is not the open question " +
                                                  std::to_string(question_id_));
    switch (v) {
        case Vote::PreferX: ++tally_.prefer_x; break;
        case Vote::PreferY: ++tally_.prefer_y; break;
        case Vote::Indifferent: ++tally_.indifferent; break;
        case Vote::Skip: ++tally_.skipped; break;
    }
    if (!respondent.empty() && std::find(respondents_.begin(), respondents_.end(), respondent) == respondents_.end())
        respondents_.push_back(respondent);

    VoteReceipt receipt;
    const std::uint32_t cap = spec_.effective_cap();
    if (tally_.responded() >= spec_.cfg.k_min) {
        finalize(aggregate(tally_, spec_.cfg), receipt);
    } else if (cap > 0 && tally_.responded() + tally_.skipped >= cap) {
        finalize(threshold_outcome(tally_, spec_.cfg.theta).value_or(Outcome::Indifferent), receipt);
    }
    return receipt;
}

void Session::finalize(Outcome proposed, VoteReceipt& receipt) {
    const Question q = *current_;
    receipt.finalized = true;
    receipt.aggregated = proposed;
    receipt.kept = engine_.submit(q, proposed);
    history_.push_back({q, proposed});
    tally_ = {};
    advance();
}

std::size_t Session::remaining_candidates() const {
    const auto& st = engine_.state();
    if (st.index_options().ordered) return st.candidate_count();
    return candidate_sets(st.kb(), st.partition()).size();
}

std::string Session::snapshot() const {
    json spec{{"objects", spec_.objects},
              {"criteria", spec_.criteria},
              {"strategy", to_string(spec_.strategy)},
              {"k_min", spec_.cfg.k_min},
              {"theta", spec_.cfg.theta},
              {"seed", spec_.seed}};
    spec["response_cap"] = spec_.response_cap ? json(*spec_.response_cap) : json(nullptr);

    json history = json::array();
    for (const auto& f : history_)
        history.push_back({f.question.x.value, f.question.y.value, f.question.c.value, to_string(f.proposed)});

    const SelectorState& sel = engine_.selector_state();
    json selector{{"brute_force_cursor", sel.brute_force_cursor}};
    if (sel.pair) {
        json remaining = json::array();
        for (auto c : sel.pair->remaining) remaining.push_back(c.value);
        selector["pair"] = {{"x", sel.pair->x.value}, {"y", sel.pair->y.value}, {"remaining", remaining}};
    } else {
        selector["pair"] = nullptr;
    }
    std::ostringstream rng;
    rng << engine_.rng();

    json payload{{"id", id_},
                 {"spec", spec},
                 {"history", history},
                 {"question_id", question_id_},
                 {"tally",
                  {{"prefer_x", tally_.prefer_x},
                   {"prefer_y", tally_.prefer_y},
                   {"indifferent", tally_.indifferent},
                   {"skipped", tally_.skipped}}},
                 {"respondents", respondents_},
                 {"selector", selector},
                 {"rng", rng.str()}};
    payload["pending"] = current_ ? json{current_->x.value, current_->y.value, current_->c.value} : json(nullptr);

    const std::string body = payload.dump();
    json doc{{"format", "pareto-session"}, {"version", kSnapshotVersion}, {"checksum", hex64(fnv1a(body))}};
    doc["payload"] = payload;
    return doc.dump(2) + "\n";
}

std::unique_ptr<Session> Session::load(const std::string& text) {
    auto corrupt = [](const std::string& why) { return Error(ErrorCode::CorruptSnapshot, "corrupt snapshot: " + why); };
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception&) {
        throw corrupt("not JSON");
    }
    try {
        if (doc.value("format", "") != "pareto-session") throw corrupt("unknown format");
        if (doc.value("version", 0) != kSnapshotVersion) throw corrupt("unsupported version");
        const json& payload = doc.at("payload");
        if (doc.at("checksum").get<std::string>() != hex64(fnv1a(payload.dump()))) throw corrupt("checksum mismatch");

        const json& js = payload.at("spec");
        SessionSpec spec;
        spec.objects = js.at("objects").get<std::vector<std::string>>();
        spec.criteria = js.at("criteria").get<std::vector<std::string>>();
        const auto strategy = parse_strategy(js.at("strategy").get<std::string>());
        if (!strategy) throw corrupt("unknown strategy");
        spec.strategy = *strategy;
        spec.cfg.k_min = js.at("k_min").get<std::uint32_t>();
        spec.cfg.theta = js.at("theta").get<double>();
        if (!js.at("response_cap").is_null()) spec.response_cap = js.at("response_cap").get<std::uint32_t>();
        spec.seed = js.at("seed").get<std::uint64_t>();

        // Rebuild without selecting a question, then replay and restore.
        auto s = std::unique_ptr<Session>(new Session(payload.at("id").get<std::string>(), spec, 0));
        const std::size_t n = spec.objects.size();
        const std::size_t nc = spec.criteria.size();
        auto question = [&](const json& a) {
            const auto x = a.at(0).get<std::uint32_t>();
            const auto y = a.at(1).get<std::uint32_t>();
            const auto c = a.at(2).get<std::uint32_t>();
            if (x >= n || y >= n || c >= nc || x == y) throw corrupt("question out of range");
            return Question{ObjectId{x}, ObjectId{y}, CriterionId{c}};
        };
        for (const auto& h : payload.at("history")) {
            const auto o = parse_outcome(h.at(3).get<std::string>());
            if (!o) throw corrupt("bad outcome");
            const Question q = question(h);
            s->engine_.submit(q, *o);
            s->history_.push_back({q, *o});
        }
        SelectorState sel;
        const json& jsel = payload.at("selector");
        sel.brute_force_cursor = jsel.at("brute_force_cursor").get<std::uint64_t>();
        if (!jsel.at("pair").is_null()) {
            PairState p;
            p.x = ObjectId{jsel["pair"].at("x").get<std::uint32_t>()};
            p.y = ObjectId{jsel["pair"].at("y").get<std::uint32_t>()};
            for (const auto& c : jsel["pair"].at("remaining")) p.remaining.push_back(CriterionId{c.get<std::uint32_t>()});
            sel.pair = p;
        }
        Rng rng;
        std::istringstream rng_in(payload.at("rng").get<std::string>());
        rng_in >> rng;
        if (!rng_in) throw corrupt("bad rng state");
        std::optional<Question> pending;
        if (!payload.at("pending").is_null()) pending = question(payload.at("pending"));
        if (pending && s->engine_.state().kb().outcome_of(*pending) &&
            spec.strategy.micro != MicroOrdering::BruteForce)
            throw corrupt("open question is already answered");
        if (!pending && !is_terminal(s->engine_.state().partition())) throw corrupt("history does not reach a terminal state");
        s->engine_.restore(sel, rng, pending);
        s->current_ = pending;
        s->question_id_ = payload.at("question_id").get<std::uint64_t>();
        const json& t = payload.at("tally");
        s->tally_ = {t.at("prefer_x").get<std::uint32_t>(), t.at("prefer_y").get<std::uint32_t>(),
                     t.at("indifferent").get<std::uint32_t>(), t.at("skipped").get<std::uint32_t>()};
        s->respondents_ = payload.at("respondents").get<std::vector<std::string>>();
        return s;
    } catch (const json::exception& e) {
        throw corrupt(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptSnapshot) throw;
        throw corrupt(e.what());
    }
}

// ---------------------------------------------------------------------------

namespace {

json labels(const Universe& u, const std::vector<ObjectId>& ids) {
    json out = json::array();
    for (auto o : ids) out.push_back(u.object_label(o));
    return out;
}

json question_view(const Session& s) {
    if (!s.current()) return nullptr;
    const Universe& u = s.universe();
    const Question q = *s.current();
    return {{"id", s.question_id()},
            {"x", u.object_label(q.x)},
            {"y", u.object_label(q.y)},
            {"criterion", u.criterion_label(q.c)},
            {"x_index", q.x.value},
            {"y_index", q.y.value},
            {"c_index", q.c.value},
            {"choices", {"prefer_x", "indifferent", "prefer_y", "skip"}}};
}

}  // namespace

std::string question_json(const Session& s) {
    json j{{"session", s.id()}, {"status", to_string(s.status())}, {"question", question_view(s)}};
    return j.dump();
}

std::string state_json(const Session& s) {
    const Universe& u = s.universe();
    const auto& part = s.engine().state().partition();
    const auto& t = s.engine().transcript();
    const auto total = u.question_count();
    json j{{"id", s.id()},
           {"status", to_string(s.status())},
           {"strategy", to_string(s.spec().strategy)},
           {"objects", u.objects()},
           {"criteria", u.criteria()},
           {"partition",
            {{"confirmed", labels(u, part.confirmed())},
             {"unknown", labels(u, part.unknown())},
             {"dominated", labels(u, part.dominated())}}},
           {"counts",
            {{"asked", t.questions_asked},
             {"derived", t.derived_facts},
             {"resolved", t.resolved},
             {"remaining_candidates", s.remaining_candidates()}}},
           {"question", question_view(s)},
           {"tally",
            {{"prefer_x", s.tally().prefer_x},
             {"prefer_y", s.tally().prefer_y},
             {"indifferent", s.tally().indifferent},
             {"skipped", s.tally().skipped}}},
           {"progress",
            {{"asked", t.questions_asked},
             {"total", total},
             {"fraction", total == 0 ? 0.0 : static_cast<double>(t.questions_asked) / static_cast<double>(total)}}},
           {"config",
            {{"k_min", s.spec().cfg.k_min},
             {"theta", s.spec().cfg.theta},
             {"response_cap", s.spec().effective_cap()}}}};
    return j.dump();
}

std::string result_json(const Session& s) {
    const Universe& u = s.universe();
    const auto& part = s.engine().state().partition();
    json j{{"id", s.id()},
           {"status", to_string(s.status())},
           {"pareto", labels(u, part.confirmed())},
           {"dominated", labels(u, part.dominated())},
           {"unknown", labels(u, part.unknown())},
           {"asked", s.engine().transcript().questions_asked}};
    return j.dump();
}

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string dominance_dot(const KnowledgeBase& kb, const Partition& part, const Universe& u) {
    const bool draft = !is_terminal(part);
    std::string out = "digraph dominance {\n";
    if (draft) out += "  label=\"draft\";\n";
    for (std::uint32_t o = 0; o < u.object_count(); ++o) {
        out += "  " + dot_quote(u.object_label(ObjectId{o}));
        if (part.status(ObjectId{o}) == Status::Confirmed) out += " [peripheries=2]";
        out += ";\n";
    }
    for (std::uint32_t a = 0; a < u.object_count(); ++a)
        for (std::uint32_t b = 0; b < u.object_count(); ++b)
            if (a != b && kb.dominates(ObjectId{a}, ObjectId{b}))
                out += "  " + dot_quote(u.object_label(ObjectId{a})) + " -> " + dot_quote(u.object_label(ObjectId{b})) +
                       ";\n";
    return out + "}\n";
}

std::string dominance_dot(const Session& s) {
    return dominance_dot(s.engine().state().kb(), s.engine().state().partition(), s.universe());
}

SessionSpec parse_session_spec(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidSpec, "request body is not JSON");
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "request body must be an object");
    SessionSpec spec;
    try {
        if (j.contains("fixture")) {
            const auto d = builtin_fixture(j["fixture"].get<std::string>());
            if (!d) throw Error(ErrorCode::InvalidSpec, "unknown fixture");
            spec.objects = d->universe.objects();
            spec.criteria = d->universe.criteria();
        } else {
            if (!j.contains("objects") || !j.contains("criteria"))
                throw Error(ErrorCode::InvalidSpec, "objects and criteria are required");
            spec.objects = j["objects"].get<std::vector<std::string>>();
            spec.criteria = j["criteria"].get<std::vector<std::string>>();
        }
        if (j.contains("strategy")) {
            const auto s = parse_strategy(j["strategy"].get<std::string>());
            if (!s) throw Error(ErrorCode::InvalidSpec, "unknown strategy");
            spec.strategy = *s;
        }
        if (j.contains("k_min")) spec.cfg.k_min = j["k_min"].get<std::uint32_t>();
        if (j.contains("theta")) spec.cfg.theta = j["theta"].get<double>();
        if (j.contains("response_cap") && !j["response_cap"].is_null())
            spec.response_cap = j["response_cap"].get<std::uint32_t>();
        if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidSpec, e.what());
    }
    return spec;
}

// ---------------------------------------------------------------------------

SessionRegistry::SessionRegistry(std::string persist_dir) : persist_dir_(std::move(persist_dir)) {
    salt_ = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    if (persist_dir_.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(persist_dir_);
    for (const auto& entry : fs::directory_iterator(persist_dir_)) {
        if (entry.path().extension() != ".json") continue;
        try {
            std::ifstream in(entry.path());
            std::stringstream buf;
            buf << in.rdbuf();
            auto session = Session::load(buf.str());
            auto e = std::make_shared<Entry>();
            const std::string id = session->id();
            e->session = std::move(session);
            sessions_[id] = std::move(e);
        } catch (const Error& e) {
            std::cerr << "skipping " << entry.path().string() << ": " << e.what() << "\n";
        }
    }
}

std::string SessionRegistry::create(SessionSpec spec) {
    std::lock_guard lock(mu_);
    std::string id;
    do {
        std::uint64_t h = salt_ ^ (++counter_ * 0x9E3779B97F4A7C15ULL);
        h ^= h >> 31;
        h *= 0xBF58476D1CE4E5B9ULL;
        h ^= h >> 29;
        id = "s" + hex64(h).substr(0, 12);
    } while (sessions_.count(id));
    auto e = std::make_shared<Entry>();
    e->session = std::make_unique<Session>(id, std::move(spec));
    persist(*e->session);
    sessions_[id] = std::move(e);
    return id;
}

bool SessionRegistry::contains(const std::string& id) const {
    std::lock_guard lock(mu_);
    return sessions_.count(id) > 0;
}

std::vector<std::string> SessionRegistry::ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
}

std::shared_ptr<SessionRegistry::Entry> SessionRegistry::find(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
    return it->second;
}

void SessionRegistry::persist(const Session& s) const {
    if (persist_dir_.empty()) return;
    namespace fs = std::filesystem;
    const fs::path target = fs::path(persist_dir_) / (s.id() + ".json");
    const fs::path tmp = fs::path(persist_dir_) / (s.id() + ".json.tmp");
    {
        std::ofstream out(tmp);
        out << s.snapshot();
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownSession: return 404;
        case ErrorCode::StaleQuestion:
        case ErrorCode::SessionTerminal: return 409;
        case ErrorCode::InvalidSpec: return 422;
        case ErrorCode::InvalidArgument: return 400;
        default: return 500;
    }
}

}  // namespace pareto
