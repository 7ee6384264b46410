#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pareto/order.hpp"
#include "pareto/types.hpp"

namespace pareto {

/// Raw answers collected for one question x ?c y.
struct VoteTally {
    std::uint32_t prefer_x = 0;
    std::uint32_t prefer_y = 0;
    std::uint32_t indifferent = 0;
    std::uint32_t skipped = 0;

    std::uint32_t responded() const { return prefer_x + prefer_y + indifferent; }
    VoteTally reversed() const { return {prefer_y, prefer_x, indifferent, skipped}; }
    friend bool operator==(const VoteTally&, const VoteTally&) = default;
};

struct AggregationConfig {
    std::uint32_t k_min = 5;
    double theta = 0.6;

    /// One answer finalizes each question.
    static AggregationConfig interactive() { return {1, 0.51}; }

    /// Throws InvalidArgument unless theta is in (0.5, 1] and k_min >= 1.
    void validate() const;
};

/// Threshold rule over the responded (non-skip) votes.
/// Throws InsufficientVotes when fewer than cfg.k_min votes responded.
Outcome aggregate(const VoteTally& tally, const AggregationConfig& cfg);

/// Same rule without the k_min floor; nullopt when nobody responded.
std::optional<Outcome> threshold_outcome(const VoteTally& tally, double theta);

/// Contradiction handling before an outcome enters the knowledge base.  A
/// strict outcome that would make a recorded indifference strict through
/// transitivity is replaced by Indifferent.  Throws Unresolvable when the
/// exact reverse of a proposed strict fact is already derivable.
Outcome resolve_contradiction(const KnowledgeBase& kb, const Question& q, Outcome proposed);

enum class Vote : std::uint8_t { PreferX, PreferY, Indifferent, Skip };

std::string_view to_string(Vote v);
std::optional<Vote> parse_vote(std::string_view s);

struct Response {
    Question question;
    Vote vote;
};

struct RespondentAnswers {
    std::string respondent;
    std::vector<Response> responses;
};

struct ValidationQuestion {
    Question question;
    Outcome expected;
};

struct ValidationResult {
    std::vector<RespondentAnswers> retained;
    std::size_t rejected = 0;
};

/// Drops every response of a respondent who answered a validation question
/// differently from what was expected.  Skipping a validation question is not
/// a deviation.
ValidationResult filter_by_validation(std::vector<RespondentAnswers> answers,
                                      const std::vector<ValidationQuestion>& validation);

/// Sums responses into per-question tallies, oriented with x < y.
std::vector<std::pair<Question, VoteTally>> tally_responses(
    const std::vector<RespondentAnswers>& answers);

}  // namespace pareto
