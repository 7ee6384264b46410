#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pareto/aggregation.hpp"
#include "pareto/engine.hpp"
#include "pareto/simulation.hpp"
#include "pareto/types.hpp"

namespace pareto {

/// Objects and criteria plus whatever answers are available for them: a
/// complete ground truth, raw vote tallies, or both.
struct Dataset {
    std::string name;
    std::string note;
    Universe universe;
    std::optional<GroundTruth> truth;
    /// Tallies oriented with x < y.
    std::map<Question, VoteTally> votes;
};

/// Ground truth JSON: {"objects": [...], "criteria": [...],
///   "strict": {"<criterion>": [["better", "worse"], ...]}}; unlisted pairs
/// are indifferent and edge lists are closed transitively.
/// Vote table JSON: either a bare array of
///   {"x", "y", "c", "prefer_x", "prefer_y", "indifferent", "skipped"}
/// (labels taken in order of appearance) or {"objects", "criteria", "votes"}.
/// Throws InvalidSpec on malformed input.
Dataset parse_dataset(const std::string& text, const std::string& name = "");
Dataset load_dataset_file(const std::string& path);

/// Serializes back to the JSON formats above (truth and votes together when
/// both are present).
std::string dataset_to_json(const Dataset& d);

std::vector<std::string> fixture_names();
/// movie-story, movie-full or fig3; nullopt for other names.
std::optional<Dataset> builtin_fixture(const std::string& name);

/// A fixture name, a file path, or a path relative to $PARETO_DATA_DIR.
Dataset resolve_dataset(const std::string& name_or_path);

/// Answers from recorded vote tallies.  Throws IncompleteDataset for a
/// question without a tally.
class VoteTableSource : public AnswerSource {
public:
    VoteTableSource(const Dataset& d, AggregationConfig cfg = {});
    Outcome answer(const Question& q) override;

private:
    Dataset d_;
    AggregationConfig cfg_;
};

/// The truth when there is one, otherwise the vote table.
std::unique_ptr<AnswerSource> answer_source_for(const Dataset& d, AggregationConfig cfg = {});

}  // namespace pareto
