#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "pareto/service.hpp"
#include "support.hpp"

using namespace pareto;
using nlohmann::json;

namespace {

SessionSpec movie_spec(const std::string& strategy = "frq", std::uint32_t k_min = 1) {
    SessionSpec s;
    s.objects = {"a", "b", "c", "d", "e", "f"};
    s.criteria = {"story", "music", "acting"};
    s.strategy = *parse_strategy(strategy);
    s.cfg = {k_min, 0.6};
    return s;
}

Vote vote_for(Outcome o) {
    switch (o) {
        case Outcome::XBetter: return Vote::PreferX;
        case Outcome::YBetter: return Vote::PreferY;
        default: return Vote::Indifferent;
    }
}

// Answers with the truth until terminal or `steps` questions were finalized.
void drive(Session& s, const GroundTruth& truth, std::size_t steps = SIZE_MAX) {
    for (std::size_t i = 0; i < steps && s.current(); ++i) {
        const auto before = s.engine().transcript().questions_asked;
        const Vote v = vote_for(truth.outcome(*s.current()));
        while (!s.vote(s.question_id(), v, "r").finalized) {
        }
        CHECK(s.engine().transcript().questions_asked == before + 1);
    }
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("fresh session state") {
    Session s("t", movie_spec());
    CHECK(s.status() == SessionStatus::Active);
    REQUIRE(s.current());
    const json st = json::parse(state_json(s));
    CHECK(st["partition"]["unknown"].size() == 6);
    CHECK(st["counts"]["asked"] == 0);
    CHECK(st["progress"]["asked"] == 0);
    CHECK(st["progress"]["total"] == 45);
    CHECK(st["question"]["id"] == s.question_id());
}

TEST_CASE("session spec validation") {
    SessionSpec one;
    one.objects = {"solo"};
    one.criteria = {"k"};
    Session s("one", one);
    CHECK(s.status() == SessionStatus::Terminal);
    CHECK(json::parse(result_json(s))["pareto"] == json::array({"solo"}));
    CHECK(dominance_dot(s).find("->") == std::string::npos);

    SessionSpec none = one;
    none.objects = {"a", "b"};
    none.criteria = {};
    CHECK(code_of([&] { Session("x", none); }) == ErrorCode::InvalidSpec);
    SessionSpec dup = one;
    dup.objects = {"a", "a"};
    CHECK(code_of([&] { Session("x", dup); }) == ErrorCode::InvalidSpec);
    SessionSpec bad_theta = movie_spec();
    bad_theta.cfg.theta = 0.4;
    CHECK(code_of([&] { Session("x", bad_theta); }) == ErrorCode::InvalidSpec);
    CHECK(code_of([] { parse_session_spec("{\"objects\": [\"a\"]}"); }) == ErrorCode::InvalidSpec);
    CHECK(code_of([] { parse_session_spec("{\"fixture\": \"movie-full\", \"strategy\": \"best\"}"); }) ==
          ErrorCode::InvalidSpec);
    const SessionSpec fx = parse_session_spec(R"({"fixture": "movie-full", "strategy": "randomp", "k_min": 3, "seed": 9})");
    CHECK(fx.objects.size() == 6);
    CHECK(fx.strategy == StrategyKind::random_p());
    CHECK(fx.cfg.k_min == 3);
    CHECK(fx.seed == 9);
}

TEST_CASE("votes finalize by threshold") {
    Session s("t", movie_spec("frq", 5));
    const auto qid = s.question_id();
    for (Vote v : {Vote::PreferX, Vote::PreferX, Vote::Skip, Vote::PreferY, Vote::Indifferent})
        CHECK_FALSE(s.vote(qid, v, "r").finalized);
    const VoteReceipt r = s.vote(qid, Vote::PreferX, "r");
    CHECK(r.finalized);
    CHECK(r.aggregated == Outcome::XBetter);
    CHECK(s.question_id() == qid + 1);
    CHECK(s.tally() == VoteTally{});
}

TEST_CASE("skips alone hit the response cap") {
    SessionSpec spec = movie_spec("frq", 2);
    Session s("t", spec);
    const auto qid = s.question_id();
    for (int i = 0; i < 5; ++i) CHECK_FALSE(s.vote(qid, Vote::Skip, "r").finalized);
    const VoteReceipt r = s.vote(qid, Vote::Skip, "r");  // 3 * k_min responses
    CHECK(r.finalized);
    CHECK(r.kept == Outcome::Indifferent);

    spec.response_cap = 0;
    Session uncapped("u", spec);
    for (int i = 0; i < 50; ++i) CHECK_FALSE(uncapped.vote(uncapped.question_id(), Vote::Skip, "r").finalized);
}

TEST_CASE("stale and terminal votes are refused") {
    Session s("t", movie_spec());
    const auto old = s.question_id();
    s.vote(old, Vote::PreferX, "r");
    CHECK(code_of([&] { s.vote(old, Vote::PreferX, "r"); }) == ErrorCode::StaleQuestion);
    drive(s, *builtin_fixture("movie-full")->truth);
    CHECK(s.status() == SessionStatus::Terminal);
    CHECK(code_of([&] { s.vote(s.question_id(), Vote::PreferX, "r"); }) == ErrorCode::SessionTerminal);
}

TEST_CASE("movie session reaches the known Pareto set") {
    const Dataset movie = *builtin_fixture("movie-full");
    for (const std::string strategy : {"frq", "randomp", "randomq", "bruteforce", "-cq-mo"}) {
        CAPTURE(strategy);
        Session s("t", movie_spec(strategy));
        drive(s, *movie.truth);
        CHECK(s.status() == SessionStatus::Terminal);
        CHECK(json::parse(result_json(s))["pareto"] == json::array({"b"}));
        const json st = json::parse(state_json(s));
        CHECK(st["partition"]["unknown"].empty());
        CHECK(st["question"].is_null());
    }
    Session s("t", movie_spec());
    drive(s, *movie.truth);
    const std::string dot = dominance_dot(s);
    for (const char* edge : {"\"b\" -> \"c\"", "\"b\" -> \"d\"", "\"b\" -> \"e\"", "\"b\" -> \"f\"", "\"c\" -> \"a\""})
        CHECK(dot.find(edge) != std::string::npos);
    CHECK(dot.find("\"b\" [peripheries=2]") != std::string::npos);
    CHECK(dot.find("draft") == std::string::npos);
}

TEST_CASE("cyclic fixture exports the 3-cycle") {
    const Dataset fig3 = *builtin_fixture("fig3");
    SessionSpec spec;
    spec.objects = fig3.universe.objects();
    spec.criteria = fig3.universe.criteria();
    spec.cfg = {1, 0.6};
    Session s("t", spec);
    CHECK(dominance_dot(s).find("draft") != std::string::npos);
    drive(s, *fig3.truth);
    CHECK(s.engine().transcript().questions_asked == 9);
    const std::string dot = dominance_dot(s);
    for (const char* edge : {"\"x\" -> \"y\"", "\"y\" -> \"z\"", "\"z\" -> \"x\""}) CHECK(dot.find(edge) != std::string::npos);
}

TEST_CASE("snapshots round-trip mid-session") {
    const Dataset movie = *builtin_fixture("movie-full");
    for (const std::string strategy : {"frq", "randomp", "randomq", "bruteforce", "-cq+mo", "-cq-mo"}) {
        for (std::size_t steps : {0, 1, 4, 9}) {
            CAPTURE(strategy);
            CAPTURE(steps);
            SessionSpec spec = movie_spec(strategy, 3);
            spec.seed = 11 + steps;
            Session s("t", spec);
            drive(s, *movie.truth, steps);
            if (s.current()) s.vote(s.question_id(), Vote::PreferX, "partial");  // an open tally
            const std::string snap = s.snapshot();
            auto back = Session::load(snap);
            CHECK(back->snapshot() == snap);
            CHECK(state_json(*back) == state_json(s));
            if (s.current()) {
                REQUIRE(back->current());
                CHECK(*back->current() == *s.current());
            }
            // Both continue identically.
            drive(s, *movie.truth);
            drive(*back, *movie.truth);
            CHECK(s.engine().transcript().questions_asked == back->engine().transcript().questions_asked);
            CHECK(state_json(*back) == state_json(s));
        }
    }
}

TEST_CASE("random pair state survives a snapshot") {
    const Dataset movie = *builtin_fixture("movie-full");
    Session s("t", movie_spec("randomp"));
    drive(s, *movie.truth, 1);
    REQUIRE(s.engine().selector_state().pair);
    auto back = Session::load(s.snapshot());
    REQUIRE(back->engine().selector_state().pair);
    CHECK(back->engine().selector_state().pair->x == s.engine().selector_state().pair->x);
    CHECK(back->engine().selector_state().pair->y == s.engine().selector_state().pair->y);
}

TEST_CASE("corrupt snapshots are rejected") {
    Session s("t", movie_spec());
    drive(s, *builtin_fixture("movie-full")->truth, 3);
    const std::string snap = s.snapshot();
    for (std::size_t pos : {snap.size() / 3, snap.size() / 2, snap.size() - 10}) {
        std::string bad = snap;
        bad[pos] = bad[pos] == '1' ? '2' : '1';
        CHECK(code_of([&] { Session::load(bad); }) == ErrorCode::CorruptSnapshot);
    }
    CHECK(code_of([] { Session::load("not json"); }) == ErrorCode::CorruptSnapshot);
    json j = json::parse(snap);
    j["version"] = 99;
    CHECK(code_of([&] { Session::load(j.dump()); }) == ErrorCode::CorruptSnapshot);
}

TEST_CASE("registry sessions and persistence") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "pareto_registry_test";
    fs::remove_all(dir);
    std::string id;
    std::string state;
    {
        SessionRegistry reg(dir.string());
        id = reg.create(movie_spec());
        CHECK(reg.contains(id));
        reg.with(id, [](Session& s) { s.vote(s.question_id(), Vote::PreferY, "r"); });
        state = reg.with(id, [](Session& s) { return state_json(s); });
        CHECK(code_of([&] { reg.with("missing", [](Session&) {}); }) == ErrorCode::UnknownSession);
        CHECK(reg.create(movie_spec()) != id);
    }
    SessionRegistry again(dir.string());
    REQUIRE(again.contains(id));
    CHECK(again.with(id, [](Session& s) { return state_json(s); }) == state);
    fs::remove_all(dir);
}

TEST_CASE("error codes map to HTTP statuses") {
    CHECK(http_status(ErrorCode::UnknownSession) == 404);
    CHECK(http_status(ErrorCode::StaleQuestion) == 409);
    CHECK(http_status(ErrorCode::SessionTerminal) == 409);
    CHECK(http_status(ErrorCode::InvalidSpec) == 422);
    CHECK(http_status(ErrorCode::InvalidArgument) == 400);
}
