// Links only the shared C library.
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "pareto/pareto.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    pareto_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("lower bound and status names") {
    CHECK(pareto_lower_bound(10, 3, 4) == 24);
    CHECK(pareto_lower_bound(3, 3, 0) == 9);
    CHECK(std::string(pareto_status_name(PARETO_OK)) == "Ok");
    CHECK(std::string(pareto_status_name(PARETO_E_STALE_QUESTION)) == "StaleQuestion");
    CHECK(std::string(pareto_status_name(PARETO_E_INTERNAL)) == "Internal");
}

TEST_CASE("session through the C API") {
    pareto_session* s = nullptr;
    REQUIRE(pareto_session_create(R"({"fixture": "movie-full", "k_min": 1})", &s) == PARETO_OK);
    char* out = nullptr;
    REQUIRE(pareto_session_question(s, &out) == PARETO_OK);
    const json q = json::parse(take(out));
    const std::uint64_t qid = q["question"]["id"];
    int finalized = 0;
    CHECK(pareto_session_vote(s, qid, "prefer_x", "w", &finalized) == PARETO_OK);
    CHECK(finalized == 1);
    CHECK(pareto_session_vote(s, qid, "prefer_x", "w", &finalized) == PARETO_E_STALE_QUESTION);
    CHECK(std::strlen(pareto_last_error()) > 0);
    CHECK(pareto_session_vote(s, qid + 1, "perhaps", "w", nullptr) == PARETO_E_INVALID_ARGUMENT);

    REQUIRE(pareto_session_snapshot(s, &out) == PARETO_OK);
    const std::string snap = take(out);
    pareto_session* back = nullptr;
    REQUIRE(pareto_session_load(snap.c_str(), &back) == PARETO_OK);
    char* a = nullptr;
    char* b = nullptr;
    REQUIRE(pareto_session_state(s, &a) == PARETO_OK);
    REQUIRE(pareto_session_state(back, &b) == PARETO_OK);
    CHECK(take(a) == take(b));

    std::string broken = snap;
    broken[broken.size() / 2] ^= 1;
    pareto_session* none = nullptr;
    CHECK(pareto_session_load(broken.c_str(), &none) == PARETO_E_CORRUPT_SNAPSHOT);
    CHECK(none == nullptr);

    REQUIRE(pareto_session_dot(s, &out) == PARETO_OK);
    CHECK(take(out).rfind("digraph", 0) == 0);
    REQUIRE(pareto_session_result(s, &out) == PARETO_OK);
    CHECK(json::parse(take(out))["status"] == "active");

    pareto_session_free(back);
    pareto_session_free(s);
    CHECK(pareto_session_create(R"({"objects": ["a", "b"], "criteria": []})", &s) == PARETO_E_INVALID_SPEC);
}

TEST_CASE("simulate through the C API") {
    pareto_simulate_options o;
    pareto_simulate_defaults(&o);
    o.objects = "8";
    o.criteria = "2";
    o.strategies = "frq,randomq";
    o.replicates = 2;
    std::vector<std::string> lines;
    char* summary = nullptr;
    REQUIRE(pareto_simulate(&o, [](const char* l, void* u) { static_cast<std::vector<std::string>*>(u)->push_back(l); },
                            &lines, &summary) == PARETO_OK);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0].rfind("n,criteria,strategy", 0) == 0);
    const json j = json::parse(take(summary));
    CHECK(j["strategies"].size() == 2);
    CHECK(j["oracle_mismatches"] == 0);

    o.strategies = "nonsense";
    CHECK(pareto_simulate(&o, nullptr, nullptr, nullptr) == PARETO_E_INVALID_ARGUMENT);
    o.strategies = "frq";
    o.objects = nullptr;
    o.criteria = nullptr;
    o.fixture = "movie-story";
    CHECK(pareto_simulate(&o, nullptr, nullptr, nullptr) == PARETO_E_INCOMPLETE_DATASET);
}

TEST_CASE("replay and fixtures through the C API") {
    char* out = nullptr;
    REQUIRE(pareto_replay("movie-full", "frq", 1, 5, 0.6, "table", &out) == PARETO_OK);
    const std::string table = take(out);
    CHECK(table.find("asked: 17") != std::string::npos);
    CHECK(table.find("pareto: {b}") != std::string::npos);
    REQUIRE(pareto_replay("movie-full", "bruteforce", 1, 5, 0.6, "jsonl", &out) == PARETO_OK);
    const std::string jsonl = take(out);
    CHECK(jsonl.find("\"source\":\"asked\"") != std::string::npos);
    CHECK(pareto_replay("movie-story", "frq", 1, 5, 0.6, "table", &out) == PARETO_E_INCOMPLETE_DATASET);
    REQUIRE(pareto_fixture_names(&out) == PARETO_OK);
    CHECK(take(out) == "movie-story,movie-full,fig3");
    REQUIRE(pareto_fixture_json("fig3", &out) == PARETO_OK);
    CHECK(json::parse(take(out))["objects"].size() == 3);
}
