#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support.hpp"

using namespace pareto;

TEST_CASE("shipped fixture files match the built-in fixtures") {
    for (const auto& name : fixture_names()) {
        CAPTURE(name);
        const std::string path = std::string(PARETO_SOURCE_DIR) + "/data/fixtures/" + name + ".json";
        std::ifstream in(path);
        REQUIRE(in.good());
        std::stringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == dataset_to_json(*builtin_fixture(name)));
    }
}

TEST_CASE("dataset JSON round-trips") {
    for (const auto& name : fixture_names()) {
        const Dataset d = *builtin_fixture(name);
        const Dataset back = parse_dataset(dataset_to_json(d));
        CHECK(back.universe.objects() == d.universe.objects());
        CHECK(back.universe.criteria() == d.universe.criteria());
        CHECK(back.votes == d.votes);
        CHECK(back.truth.has_value() == d.truth.has_value());
        if (d.truth)
            for (std::uint32_t c = 0; c < d.universe.criterion_count(); ++c)
                for (std::uint32_t x = 0; x < d.universe.object_count(); ++x)
                    for (std::uint32_t y = 0; y < d.universe.object_count(); ++y)
                        CHECK(back.truth->rel(c, x, y) == d.truth->rel(c, x, y));
    }
}

TEST_CASE("truth edges are closed transitively") {
    const Dataset d = parse_dataset(R"({"objects": ["p", "q", "r"], "criteria": ["k"],
                                         "strict": {"k": [["p", "q"], ["q", "r"]]}})");
    REQUIRE(d.truth);
    CHECK(d.truth->rel(0, 0, 2) == 1);
    CHECK(d.truth->rel(0, 2, 0) == -1);
}

TEST_CASE("malformed datasets are rejected") {
    auto code_of = [](const std::string& text) {
        try {
            parse_dataset(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code_of("{") == ErrorCode::InvalidSpec);
    CHECK(code_of(R"({"objects": ["a", "a"], "criteria": ["k"], "strict": {}})") == ErrorCode::InvalidSpec);
    CHECK(code_of(R"({"objects": ["a", "b"], "criteria": [], "strict": {}})") == ErrorCode::InvalidSpec);
    CHECK(code_of(R"({"objects": ["a", "b"], "criteria": ["k"],
                      "strict": {"k": [["a", "b"], ["b", "a"]]}})") == ErrorCode::InvalidSpec);
    CHECK(code_of(R"({"objects": ["a", "b"], "criteria": ["k"], "strict": {"k": [["a", "z"]]}})") ==
          ErrorCode::InvalidSpec);
    CHECK(code_of(R"({"objects": ["a", "b"], "criteria": ["k"]})") == ErrorCode::InvalidSpec);
    CHECK(code_of(R"([{"x": "a", "y": "b", "c": "k", "prefer_x": -1}])") == ErrorCode::InvalidSpec);
}

TEST_CASE("vote rows are oriented by object order") {
    const Dataset d = parse_dataset(R"([
        {"x": "a", "y": "b", "c": "k", "prefer_x": 1},
        {"x": "c", "y": "a", "c": "k", "prefer_x": 4, "prefer_y": 1, "skipped": 2}])");
    const Question ac{ObjectId{0}, ObjectId{2}, CriterionId{0}};
    REQUIRE(d.votes.count(ac));
    CHECK(d.votes.at(ac) == VoteTally{1, 4, 0, 2});
}

TEST_CASE("vote table answers and reports gaps") {
    const Dataset story = *builtin_fixture("movie-story");
    VoteTableSource src(story, {5, 0.6});
    const auto a = *story.universe.find_object("a"), f = *story.universe.find_object("f");
    CHECK(src.answer({a, f, CriterionId{0}}) == Outcome::XBetter);
    CHECK(src.answer({f, a, CriterionId{0}}) == Outcome::YBetter);
    try {
        src.answer({a, f, CriterionId{1}});
        FAIL("expected IncompleteDataset");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IncompleteDataset);
    }
}

TEST_CASE("datasets resolve from the data directory") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "pareto_dataset_test";
    fs::create_directories(dir);
    std::ofstream(dir / "tiny.json") << R"({"objects": ["u", "v"], "criteria": ["k"], "strict": {"k": [["u", "v"]]}})";
    ::setenv("PARETO_DATA_DIR", dir.c_str(), 1);
    const Dataset d = resolve_dataset("tiny");
    CHECK(d.universe.object_count() == 2);
    CHECK(d.name == "tiny");
    CHECK(resolve_dataset("fig3").universe.object_count() == 3);
    CHECK_THROWS_AS(resolve_dataset("no-such-dataset"), Error);
    ::unsetenv("PARETO_DATA_DIR");
    fs::remove_all(dir);
}
