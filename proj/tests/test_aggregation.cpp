#include "doctest.h"
#include "support.hpp"

using namespace pareto;

namespace {

Question q(std::uint32_t x, std::uint32_t y, std::uint32_t c = 0) { return {ObjectId{x}, ObjectId{y}, CriterionId{c}}; }

}  // namespace

TEST_CASE("threshold aggregation") {
    const AggregationConfig cfg{5, 0.6};
    CHECK(aggregate({3, 1, 1, 0}, cfg) == Outcome::XBetter);
    CHECK(aggregate({1, 2, 2, 0}, cfg) == Outcome::Indifferent);
    CHECK(aggregate({0, 5, 0, 0}, cfg) == Outcome::YBetter);
    CHECK_THROWS_AS(aggregate({2, 1, 1, 9}, cfg), Error);
    CHECK(threshold_outcome({}, 0.6) == std::nullopt);
    CHECK(threshold_outcome({1, 0, 0, 0}, 0.6) == Outcome::XBetter);
}

TEST_CASE("story vote table reproduces every outcome") {
    const Dataset d = *builtin_fixture("movie-story");
    const auto story = *d.universe.find_criterion("story");
    for (const auto& row : testing::story_outcomes()) {
        const Question question{*d.universe.find_object(row.x), *d.universe.find_object(row.y), story};
        CAPTURE(row.x);
        CAPTURE(row.y);
        CHECK(aggregate(d.votes.at(question), {5, 0.6}) == row.outcome);
    }
}

TEST_CASE("aggregation is orientation consistent") {
    std::mt19937_64 rng(3);
    const AggregationConfig cfg{1, 0.6};
    for (int i = 0; i < 500; ++i) {
        const VoteTally t{static_cast<std::uint32_t>(rng() % 7), static_cast<std::uint32_t>(rng() % 7),
                          static_cast<std::uint32_t>(rng() % 7), 0};
        if (t.responded() == 0) continue;
        CHECK(aggregate(t.reversed(), cfg) == flip(aggregate(t, cfg)));
    }
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS((AggregationConfig{5, 0.5}.validate()), Error);
    CHECK_THROWS_AS((AggregationConfig{0, 0.6}.validate()), Error);
    CHECK_NOTHROW((AggregationConfig{1, 1.0}.validate()));
}

TEST_CASE("contradiction resolution") {
    // x=0 y=1 z=2
    SUBCASE("indifference then chain, reversed proposal") {
        KnowledgeBase kb(3, 1);
        kb.record_outcome(q(0, 1), Outcome::Indifferent);
        kb.record_outcome(q(1, 2), Outcome::XBetter);
        CHECK(resolve_contradiction(kb, q(2, 0), Outcome::XBetter) == Outcome::Indifferent);
        CHECK(resolve_contradiction(kb, q(0, 2), Outcome::YBetter) == Outcome::Indifferent);
    }
    SUBCASE("symmetric case") {
        KnowledgeBase kb(3, 1);
        kb.record_outcome(q(0, 1), Outcome::Indifferent);
        kb.record_outcome(q(2, 1), Outcome::XBetter);
        CHECK(resolve_contradiction(kb, q(0, 2), Outcome::XBetter) == Outcome::Indifferent);
    }
    SUBCASE("no conflict passes through and is idempotent") {
        KnowledgeBase kb(3, 1);
        kb.record_outcome(q(0, 1), Outcome::Indifferent);
        kb.record_outcome(q(1, 2), Outcome::XBetter);
        CHECK(resolve_contradiction(kb, q(0, 2), Outcome::XBetter) == Outcome::XBetter);
        CHECK(resolve_contradiction(kb, q(0, 2), Outcome::Indifferent) == Outcome::Indifferent);
    }
    SUBCASE("reverse of a derivable fact is unresolvable") {
        KnowledgeBase kb(3, 1);
        kb.record_outcome(q(0, 1), Outcome::XBetter);
        kb.record_outcome(q(1, 2), Outcome::XBetter);
        CHECK_THROWS_AS(resolve_contradiction(kb, q(2, 0), Outcome::XBetter), Error);
        CHECK(resolve_contradiction(kb, q(0, 2), Outcome::XBetter) == Outcome::XBetter);
    }
}

TEST_CASE("validation filter") {
    const Question v1 = q(0, 1), v2 = q(1, 2), other = q(0, 2);
    std::vector<RespondentAnswers> answers{
        {"good", {{v1, Vote::PreferX}, {v2, Vote::Skip}, {other, Vote::PreferY}}},
        {"bad", {{v1, Vote::PreferY}, {other, Vote::PreferX}}},
    };
    const auto r = filter_by_validation(answers, {{v1, Outcome::XBetter}, {v2, Outcome::YBetter}});
    REQUIRE(r.retained.size() == 1);
    CHECK(r.retained[0].respondent == "good");
    CHECK(r.rejected == 1);
    const auto empty = filter_by_validation({}, {{v1, Outcome::XBetter}});
    CHECK(empty.retained.empty());
    CHECK(empty.rejected == 0);
}

TEST_CASE("tally responses orients by object index") {
    std::vector<RespondentAnswers> answers{
        {"r1", {{q(2, 0), Vote::PreferX}}},
        {"r2", {{q(0, 2), Vote::PreferX}, {q(0, 1), Vote::Skip}}},
    };
    const auto t = tally_responses(answers);
    REQUIRE(t.size() == 2);
    CHECK(t[0].first == q(0, 1));
    CHECK(t[0].second.skipped == 1);
    CHECK(t[1].first == q(0, 2));
    CHECK(t[1].second == VoteTally{1, 1, 0, 0});
}

TEST_CASE("votes round-trip through their names") {
    for (auto v : {Vote::PreferX, Vote::PreferY, Vote::Indifferent, Vote::Skip}) CHECK(parse_vote(to_string(v)) == v);
    CHECK_FALSE(parse_vote("maybe").has_value());
}
