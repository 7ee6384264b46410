#include "pareto/dataset.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pareto {

using nlohmann::json;

namespace {

// Story votes for six movies.  Columns: prefer x, indifferent, prefer y.
constexpr const char* kMovieStory = R"([
  {"x": "a", "y": "b", "c": "story", "prefer_x": 1, "indifferent": 0, "prefer_y": 4, "skipped": 0},
  {"x": "a", "y": "c", "c": "story", "prefer_x": 0, "indifferent": 0, "prefer_y": 5, "skipped": 0},
  {"x": "a", "y": "d", "c": "story", "prefer_x": 0, "indifferent": 2, "prefer_y": 3, "skipped": 0},
  {"x": "a", "y": "e", "c": "story", "prefer_x": 4, "indifferent": 0, "prefer_y": 1, "skipped": 0},
  {"x": "a", "y": "f", "c": "story", "prefer_x": 3, "indifferent": 1, "prefer_y": 1, "skipped": 0},
  {"x": "b", "y": "c", "c": "story", "prefer_x": 1, "indifferent": 2, "prefer_y": 2, "skipped": 0},
  {"x": "b", "y": "d", "c": "story", "prefer_x": 1, "indifferent": 3, "prefer_y": 1, "skipped": 0},
  {"x": "b", "y": "e", "c": "story", "prefer_x": 5, "indifferent": 0, "prefer_y": 0, "skipped": 0},
  {"x": "b", "y": "f", "c": "story", "prefer_x": 4, "indifferent": 1, "prefer_y": 0, "skipped": 0},
  {"x": "c", "y": "d", "c": "story", "prefer_x": 3, "indifferent": 2, "prefer_y": 0, "skipped": 0},
  {"x": "c", "y": "e", "c": "story", "prefer_x": 4, "indifferent": 0, "prefer_y": 1, "skipped": 0},
  {"x": "c", "y": "f", "c": "story", "prefer_x": 3, "indifferent": 1, "prefer_y": 1, "skipped": 0},
  {"x": "d", "y": "e", "c": "story", "prefer_x": 3, "indifferent": 0, "prefer_y": 2, "skipped": 0},
  {"x": "d", "y": "f", "c": "story", "prefer_x": 3, "indifferent": 2, "prefer_y": 0, "skipped": 0},
  {"x": "e", "y": "f", "c": "story", "prefer_x": 1, "indifferent": 1, "prefer_y": 3, "skipped": 0}
])";

// Full relations for the six movies.  Story follows the vote table.  Acting
// c~f and d~e are set indifferent, the only choice that keeps c~e and d~f
// consistent.
constexpr const char* kMovieFull = R"({
  "objects": ["a", "b", "c", "d", "e", "f"],
  "criteria": ["story", "music", "acting"],
  "strict": {
    "story":  [["b","a"], ["c","a"], ["d","a"], ["a","e"], ["a","f"], ["b","e"], ["b","f"],
               ["c","d"], ["c","e"], ["c","f"], ["d","e"], ["d","f"], ["f","e"]],
    "music":  [["a","b"], ["a","d"], ["a","e"], ["b","e"], ["c","d"], ["c","e"], ["d","e"],
               ["f","c"], ["f","d"], ["f","e"]],
    "acting": [["b","a"], ["b","c"], ["b","d"], ["b","e"], ["b","f"], ["c","a"], ["e","a"],
               ["f","a"], ["e","f"]]
  }
})";

// Three objects whose dominance runs in a cycle.
constexpr const char* kFig3 = R"({
  "objects": ["x", "y", "z"],
  "criteria": ["c1", "c2", "c3"],
  "strict": {"c1": [["x","y"]], "c2": [["y","z"]], "c3": [["z","x"]]}
})";

std::vector<std::string> string_list(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw Error(ErrorCode::InvalidSpec, std::string("missing array '") + key + "'");
    std::vector<std::string> out;
    for (const auto& v : j[key]) {
        if (!v.is_string()) throw Error(ErrorCode::InvalidSpec, std::string("'") + key + "' must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

ObjectId object_of(const Universe& u, const std::string& label) {
    const auto o = u.find_object(label);
    if (!o) throw Error(ErrorCode::InvalidSpec, "unknown object '" + label + "'");
    return *o;
}

CriterionId criterion_of(const Universe& u, const std::string& label) {
    const auto c = u.find_criterion(label);
    if (!c) throw Error(ErrorCode::InvalidSpec, "unknown criterion '" + label + "'");
    return *c;
}

std::uint32_t count_field(const json& row, const char* key) {
    if (!row.contains(key)) return 0;
    const auto& v = row[key];
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw Error(ErrorCode::InvalidSpec, std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::uint32_t>();
}

GroundTruth parse_truth(const json& strict, const Universe& u) {
    GroundTruth truth(u.object_count(), u.criterion_count());
    if (!strict.is_object()) throw Error(ErrorCode::InvalidSpec, "'strict' must map criteria to edge lists");
    for (const auto& [label, edges] : strict.items()) {
        const CriterionId c = criterion_of(u, label);
        const std::size_t n = u.object_count();
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        if (!edges.is_array()) throw Error(ErrorCode::InvalidSpec, "edge list must be an array");
        for (const auto& e : edges) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
                throw Error(ErrorCode::InvalidSpec, "edges are [better, worse] label pairs");
            const ObjectId a = object_of(u, e[0].get<std::string>());
            const ObjectId b = object_of(u, e[1].get<std::string>());
            if (a == b) throw Error(ErrorCode::InvalidSpec, "an object cannot be better than itself");
            reach[a.value][b.value] = true;
        }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (reach[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (reach[k][j]) reach[i][j] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (reach[i][i]) throw Error(ErrorCode::InvalidSpec, "criterion '" + label + "' has a preference cycle");
            for (std::size_t j = 0; j < n; ++j)
                if (reach[i][j]) truth.set_better(c.value, i, j);
        }
    }
    truth.validate();
    return truth;
}

void add_votes(Dataset& d, const json& rows) {
    for (const auto& row : rows) {
        if (!row.is_object() || !row.contains("x") || !row.contains("y") || !row.contains("c"))
            throw Error(ErrorCode::InvalidSpec, "vote rows need x, y and c");
        Question q{object_of(d.universe, row["x"].get<std::string>()), object_of(d.universe, row["y"].get<std::string>()),
                   criterion_of(d.universe, row["c"].get<std::string>())};
        if (q.x == q.y) throw Error(ErrorCode::InvalidSpec, "vote row compares an object with itself");
        VoteTally t{count_field(row, "prefer_x"), count_field(row, "prefer_y"), count_field(row, "indifferent"),
                    count_field(row, "skipped")};
        if (q.y < q.x) {
            q = q.reversed();
            t = t.reversed();
        }
        if (d.votes.count(q)) throw Error(ErrorCode::InvalidSpec, "duplicate vote row");
        d.votes[q] = t;
    }
}

}  // namespace

Dataset parse_dataset(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidSpec, std::string("dataset is not valid JSON: ") + e.what());
    }
    Dataset d;
    d.name = name;
    try {
        if (j.is_array()) {
            std::vector<std::string> objects;
            std::vector<std::string> criteria;
            auto note = [](std::vector<std::string>& v, const json& s) {
                if (!s.is_string()) throw Error(ErrorCode::InvalidSpec, "labels must be strings");
                const auto label = s.get<std::string>();
                if (std::find(v.begin(), v.end(), label) == v.end()) v.push_back(label);
            };
            for (const auto& row : j) {
                if (!row.is_object() || !row.contains("x") || !row.contains("y") || !row.contains("c"))
                    throw Error(ErrorCode::InvalidSpec, "vote rows need x, y and c");
                note(objects, row["x"]);
                note(objects, row["y"]);
                note(criteria, row["c"]);
            }
            d.universe = Universe(objects, criteria);
            add_votes(d, j);
            return d;
        }
        if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "dataset must be a JSON object or array");
        d.universe = Universe(string_list(j, "objects"), string_list(j, "criteria"));
        if (j.contains("name") && j["name"].is_string() && d.name.empty()) d.name = j["name"].get<std::string>();
        if (j.contains("note") && j["note"].is_string()) d.note = j["note"].get<std::string>();
        if (j.contains("strict")) d.truth = parse_truth(j["strict"], d.universe);
        if (j.contains("votes")) add_votes(d, j["votes"]);
        if (!d.truth && !j.contains("votes")) throw Error(ErrorCode::InvalidSpec, "dataset has neither 'strict' nor 'votes'");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidSpec, std::string("malformed dataset: ") + e.what());
    }
    return d;
}

Dataset load_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), std::filesystem::path(path).stem().string());
}

std::string dataset_to_json(const Dataset& d) {
    // Written by hand so that each edge and each vote row stays on one line.
    const Universe& u = d.universe;
    std::vector<std::string> fields;
    if (!d.name.empty()) fields.push_back("  \"name\": " + json(d.name).dump());
    if (!d.note.empty()) fields.push_back("  \"note\": " + json(d.note).dump());
    fields.push_back("  \"objects\": " + json(u.objects()).dump());
    fields.push_back("  \"criteria\": " + json(u.criteria()).dump());
    auto block = [](const std::vector<std::string>& lines, const std::string& indent) {
        std::string out;
        for (std::size_t i = 0; i < lines.size(); ++i) out += indent + lines[i] + (i + 1 < lines.size() ? ",\n" : "\n");
        return out;
    };
    if (d.truth) {
        std::vector<std::string> per;
        for (std::uint32_t c = 0; c < u.criterion_count(); ++c) {
            std::vector<std::string> edges;
            for (std::uint32_t x = 0; x < u.object_count(); ++x)
                for (std::uint32_t y = 0; y < u.object_count(); ++y)
                    if (d.truth->rel(c, x, y) == 1)
                        edges.push_back(json::array({u.object_label(ObjectId{x}), u.object_label(ObjectId{y})}).dump());
            const std::string key = json(u.criterion_label(CriterionId{c})).dump();
            per.push_back(edges.empty() ? key + ": []" : key + ": [\n" + block(edges, "      ") + "    ]");
        }
        fields.push_back("  \"strict\": {\n" + block(per, "    ") + "  }");
    }
    if (!d.votes.empty()) {
        std::vector<std::string> rows;
        for (const auto& [q, t] : d.votes) {
            nlohmann::ordered_json row{{"x", u.object_label(q.x)},
                                       {"y", u.object_label(q.y)},
                                       {"c", u.criterion_label(q.c)},
                                       {"prefer_x", t.prefer_x},
                                       {"indifferent", t.indifferent},
                                       {"prefer_y", t.prefer_y},
                                       {"skipped", t.skipped}};
            rows.push_back(row.dump());
        }
        fields.push_back("  \"votes\": [\n" + block(rows, "    ") + "  ]");
    }
    return "{\n" + block(fields, "") + "}\n";
}

std::vector<std::string> fixture_names() { return {"movie-story", "movie-full", "fig3"}; }

std::optional<Dataset> builtin_fixture(const std::string& name) {
    if (name == "movie-story") {
        // Story votes only; music and acting questions have no answers.
        Dataset d = parse_dataset(kMovieStory, name);
        Dataset full;
        full.name = name;
        full.note = "story votes for six movies; music and acting unanswered";
        full.universe = Universe({"a", "b", "c", "d", "e", "f"}, {"story", "music", "acting"});
        for (const auto& [q, t] : d.votes) {
            const Question mapped{*full.universe.find_object(d.universe.object_label(q.x)),
                                  *full.universe.find_object(d.universe.object_label(q.y)),
                                  *full.universe.find_criterion(d.universe.criterion_label(q.c))};
            full.votes[mapped] = t;
        }
        return full;
    }
    if (name == "movie-full") {
        Dataset d = parse_dataset(kMovieFull, name);
        d.note = "complete story, music and acting relations for six movies";
        return d;
    }
    if (name == "fig3") {
        Dataset d = parse_dataset(kFig3, name);
        d.note = "three objects with cyclic dominance x>y, y>z, z>x";
        return d;
    }
    return std::nullopt;
}

Dataset resolve_dataset(const std::string& name_or_path) {
    if (auto d = builtin_fixture(name_or_path)) return *d;
    namespace fs = std::filesystem;
    if (fs::exists(name_or_path)) return load_dataset_file(name_or_path);
    if (const char* dir = std::getenv("PARETO_DATA_DIR")) {
        for (const auto& candidate : {fs::path(dir) / name_or_path, fs::path(dir) / (name_or_path + ".json")})
            if (fs::exists(candidate)) return load_dataset_file(candidate.string());
    }
    throw Error(ErrorCode::Io, "no fixture or file named '" + name_or_path + "'");
}

VoteTableSource::VoteTableSource(const Dataset& d, AggregationConfig cfg) : d_(d), cfg_(cfg) { cfg_.validate(); }

Outcome VoteTableSource::answer(const Question& q) {
    const bool swapped = q.y < q.x;
    const auto it = d_.votes.find(swapped ? q.reversed() : q);
    if (it == d_.votes.end())
        throw Error(ErrorCode::IncompleteDataset,
                    "no votes for " + d_.universe.object_label(q.x) + " vs " + d_.universe.object_label(q.y) + " on " +
                        d_.universe.criterion_label(q.c));
    const Outcome o = aggregate(it->second, cfg_);
    return swapped ? flip(o) : o;
}

namespace {

class TruthOwner : public AnswerSource {
public:
    explicit TruthOwner(const GroundTruth& t) : truth_(t), source_(truth_) {}
    Outcome answer(const Question& q) override { return source_.answer(q); }

private:
    GroundTruth truth_;
    TruthAnswerSource source_;
};

}  // namespace

std::unique_ptr<AnswerSource> answer_source_for(const Dataset& d, AggregationConfig cfg) {
    if (d.truth) return std::make_unique<TruthOwner>(*d.truth);
    return std::make_unique<VoteTableSource>(d, cfg);
}

}  // namespace pareto
