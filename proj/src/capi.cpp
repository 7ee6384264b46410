#include "pareto/pareto.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "pareto/dataset.hpp"
#include "pareto/http.hpp"
#include "pareto/report.hpp"
#include "pareto/service.hpp"
#include "pareto/simulation.hpp"

struct pareto_session {
    std::unique_ptr<pareto::Session> s;
};

namespace {

thread_local std::string last_error;

int fail(pareto_status st, const std::string& msg) {
    last_error = msg;
    return st;
}

// Runs fn, translating exceptions to status codes.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const pareto::Error& e) {
        return fail(static_cast<pareto_status>(static_cast<int>(e.code()) + 1), e.what());
    } catch (const std::exception& e) {
        return fail(PARETO_E_INTERNAL, e.what());
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

int emit(char** out, const std::string& s) {
    if (!out) return fail(PARETO_E_INVALID_ARGUMENT, "null output pointer");
    *out = dup(s);
    return PARETO_OK;
}

std::vector<std::size_t> parse_sizes(const char* list, const char* what) {
    std::vector<std::size_t> out;
    std::string s = list ? list : "";
    std::size_t pos = 0;
    while (pos <= s.size() && !s.empty()) {
        const std::size_t comma = std::min(s.find(',', pos), s.size());
        const std::string item = s.substr(pos, comma - pos);
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw pareto::Error(pareto::ErrorCode::InvalidArgument, std::string("bad ") + what + " list '" + s + "'");
        out.push_back(static_cast<std::size_t>(v));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

extern "C" {

const char* pareto_version(void) { return "1.0.0"; }

const char* pareto_status_name(int status) {
    if (status == PARETO_OK) return "Ok";
    if (status == PARETO_E_INTERNAL) return "Internal";
    if (status < 0 || status > PARETO_E_INTERNAL) return "Unknown";
    // Names are static string literals.
    return pareto::to_string(static_cast<pareto::ErrorCode>(status - 1)).data();
}

const char* pareto_last_error(void) { return last_error.c_str(); }

void pareto_string_free(char* s) { std::free(s); }

uint64_t pareto_lower_bound(uint64_t objects, uint64_t criteria, uint64_t pareto) {
    return pareto::lower_bound(objects, criteria, pareto);
}

int pareto_session_create(const char* spec_json, pareto_session** out) {
    return guarded([&] {
        if (!spec_json || !out) return fail(PARETO_E_INVALID_ARGUMENT, "null argument");
        auto spec = pareto::parse_session_spec(spec_json);
        *out = new pareto_session{std::make_unique<pareto::Session>("local", std::move(spec))};
        return static_cast<int>(PARETO_OK);
    });
}

int pareto_session_load(const char* snapshot, pareto_session** out) {
    return guarded([&] {
        if (!snapshot || !out) return fail(PARETO_E_INVALID_ARGUMENT, "null argument");
        *out = new pareto_session{pareto::Session::load(snapshot)};
        return static_cast<int>(PARETO_OK);
    });
}

void pareto_session_free(pareto_session* s) { delete s; }

int pareto_session_vote(pareto_session* s, uint64_t question_id, const char* vote, const char* respondent,
                        int* finalized) {
    return guarded([&] {
        if (!s || !vote) return fail(PARETO_E_INVALID_ARGUMENT, "null argument");
        const auto v = pareto::parse_vote(vote);
        if (!v) return fail(PARETO_E_INVALID_ARGUMENT, std::string("unknown vote '") + vote + "'");
        const auto r = s->s->vote(question_id, *v, respondent ? respondent : "");
        if (finalized) *finalized = r.finalized ? 1 : 0;
        return static_cast<int>(PARETO_OK);
    });
}

#define PARETO_VIEW(name, expr)                                                      \
    int name(const pareto_session* s, char** out) {                                  \
        return guarded([&] {                                                         \
            if (!s) return fail(PARETO_E_INVALID_ARGUMENT, "null session");          \
            return emit(out, expr);                                                  \
        });                                                                          \
    }

PARETO_VIEW(pareto_session_question, pareto::question_json(*s->s))
PARETO_VIEW(pareto_session_state, pareto::state_json(*s->s))
PARETO_VIEW(pareto_session_result, pareto::result_json(*s->s))
PARETO_VIEW(pareto_session_dot, pareto::dominance_dot(*s->s))
PARETO_VIEW(pareto_session_snapshot, s->s->snapshot())

#undef PARETO_VIEW

void pareto_simulate_defaults(pareto_simulate_options* o) {
    if (!o) return;
    pareto::ExperimentConfig d;
    *o = pareto_simulate_options{};
    o->objects = "100";
    o->criteria = "4";
    o->strategies = "bruteforce,randomq,randomp,frq";
    o->replicates = d.replicates;
    o->base_seed = d.base_seed;
    o->noise = d.noise;
    o->k = d.k;
    o->theta = d.theta;
    o->jobs = 0;
}

int pareto_simulate(const pareto_simulate_options* o, pareto_row_fn on_row, void* user, char** summary_out) {
    return guarded([&] {
        if (!o || !o->strategies) return fail(PARETO_E_INVALID_ARGUMENT, "null argument");
        pareto::ExperimentConfig cfg;
        cfg.strategies = pareto::parse_strategy_list(o->strategies);
        cfg.replicates = o->replicates;
        cfg.base_seed = o->base_seed;
        cfg.noise = o->noise;
        cfg.k = o->k;
        cfg.theta = o->theta;
        cfg.verify = o->verify != 0;
        cfg.jobs = o->jobs;

        std::optional<pareto::Dataset> fixture;
        const auto ns = parse_sizes(o->objects, "object count");
        const auto cs = parse_sizes(o->criteria, "criteria count");
        if (o->fixture && *o->fixture) {
            fixture = pareto::resolve_dataset(o->fixture);
            if (!fixture->truth)
                return fail(PARETO_E_INCOMPLETE_DATASET, std::string("dataset '") + o->fixture + "' has no ground truth");
            const std::size_t n = fixture->universe.object_count();
            const std::size_t c = fixture->universe.criterion_count();
            if ((!ns.empty() && (ns.size() != 1 || ns[0] != n)) || (!cs.empty() && (cs.size() != 1 || cs[0] != c)))
                return fail(PARETO_E_INVALID_ARGUMENT, "--n/--criteria do not match the fixture (" + std::to_string(n) +
                                                           " objects, " + std::to_string(c) + " criteria)");
            cfg.cells.push_back({n, c});
            cfg.fixture = &*fixture->truth;
        } else {
            if (ns.empty() || cs.empty()) return fail(PARETO_E_INVALID_ARGUMENT, "object and criteria counts are required");
            for (auto n : ns)
                for (auto c : cs) cfg.cells.push_back({n, c});
        }

        if (on_row) on_row(pareto::csv_header().c_str(), user);
        const bool timing = o->timing != 0;
        const auto summary = pareto::run_experiment(cfg, [&](const pareto::ExperimentRow& r) {
            if (on_row) on_row(pareto::csv_line(r, timing).c_str(), user);
        });

        const auto per = pareto::summarize(summary.rows);
        nlohmann::ordered_json j;
        j["strategies"] = nlohmann::ordered_json::array();
        for (const auto& s : per)
            j["strategies"].push_back({{"n", s.n},
                                       {"criteria", s.criteria},
                                       {"strategy", s.strategy},
                                       {"runs", s.runs},
                                       {"mean_asked", s.mean_asked},
                                       {"min_asked", s.min_asked},
                                       {"max_asked", s.max_asked},
                                       {"mean_lower_bound", s.mean_lower_bound},
                                       {"ratio_lower_bound", s.ratio_lower_bound},
                                       {"ratio_brute_force", s.ratio_brute_force}});
        j["table"] = pareto::summary_table(per);
        j["oracle_mismatches"] = summary.oracle_mismatches;
        j["bound_violations"] = summary.bound_violations;
        j["termination_mismatches"] = summary.termination_mismatches;
        j["index_mismatches"] = summary.index_mismatches;
        j["failures"] = summary.failures;
        if (summary_out) *summary_out = dup(j.dump());
        if (summary.oracle_mismatches || summary.bound_violations || summary.termination_mismatches ||
            summary.index_mismatches)
            return fail(PARETO_E_ORACLE_MISMATCH, "verification failed: " + std::to_string(summary.failures.size()) +
                                                      " run(s) disagreed with the oracle or the invariants");
        return static_cast<int>(PARETO_OK);
    });
}

int pareto_replay(const char* dataset, const char* strategy, uint64_t seed, uint32_t k_min, double theta,
                  const char* format, char** out) {
    return guarded([&] {
        if (!dataset || !strategy) return fail(PARETO_E_INVALID_ARGUMENT, "null argument");
        const std::string fmt = format ? format : "table";
        if (fmt != "table" && fmt != "jsonl") return fail(PARETO_E_INVALID_ARGUMENT, "format must be table or jsonl");
        const auto kind = pareto::parse_strategy(strategy);
        if (!kind) return fail(PARETO_E_INVALID_ARGUMENT, std::string("unknown strategy '") + strategy + "'");
        pareto::AggregationConfig cfg{k_min, theta};
        cfg.validate();
        const auto d = pareto::resolve_dataset(dataset);
        auto answers = pareto::answer_source_for(d, cfg);
        const auto t = pareto::run_framework(d.universe, *kind, *answers, seed);
        return emit(out, fmt == "table" ? pareto::replay_table(t) : pareto::transcript_jsonl(t));
    });
}

int pareto_fixture_names(char** out) {
    return guarded([&] {
        std::string s;
        for (const auto& n : pareto::fixture_names()) s += (s.empty() ? "" : ",") + n;
        return emit(out, s);
    });
}

int pareto_fixture_json(const char* name, char** out) {
    return guarded([&] {
        if (!name) return fail(PARETO_E_INVALID_ARGUMENT, "null argument");
        const auto d = pareto::builtin_fixture(name);
        if (!d) return fail(PARETO_E_INVALID_ARGUMENT, std::string("unknown fixture '") + name + "'");
        return emit(out, pareto::dataset_to_json(*d));
    });
}

int pareto_serve(const char* host, int port, const char* static_dir, const char* persist_dir,
                 pareto_ready_fn on_ready, void* user) {
    return guarded([&] {
        pareto::ServerOptions o;
        if (host) o.host = host;
        o.port = port;
        if (static_dir) o.static_dir = static_dir;
        if (persist_dir) o.persist_dir = persist_dir;
        pareto::Server server(o);
        const int bound = server.bind();
        if (on_ready) on_ready(bound, user);
        server.listen();
        return static_cast<int>(PARETO_OK);
    });
}

}  // extern "C"
