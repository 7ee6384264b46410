#include "pareto/aggregation.hpp"

#include <map>

namespace pareto {

void AggregationConfig::validate() const {
    if (!(theta > 0.5 && theta <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "theta must lie in (0.5, 1]");
    if (k_min == 0) throw Error(ErrorCode::InvalidArgument, "k_min must be at least 1");
}

namespace {

// count / total >= theta, without trusting 3.0/5.0 to round the right way.
bool reaches(std::uint32_t count, std::uint32_t total, double theta) {
    return static_cast<double>(count) >= theta * static_cast<double>(total) - 1e-9;
}

}  // namespace

std::optional<Outcome> threshold_outcome(const VoteTally& tally, double theta) {
    const std::uint32_t responded = tally.responded();
    if (responded == 0) return std::nullopt;
    if (reaches(tally.prefer_x, responded, theta)) return Outcome::XBetter;
    if (reaches(tally.prefer_y, responded, theta)) return Outcome::YBetter;
    return Outcome::Indifferent;
}

Outcome aggregate(const VoteTally& tally, const AggregationConfig& cfg) {
    if (tally.responded() < cfg.k_min || tally.responded() == 0)
        throw Error(ErrorCode::InsufficientVotes,
                    "only " + std::to_string(tally.responded()) + " responses, need " +
                        std::to_string(cfg.k_min));
    return *threshold_outcome(tally, cfg.theta);
}

Outcome resolve_contradiction(const KnowledgeBase& kb, const Question& q, Outcome proposed) {
    if (const auto known = kb.outcome_of(q)) {
        if (*known == proposed) return proposed;
        if (is_strict(*known) && is_strict(proposed))
            throw Error(ErrorCode::Unresolvable, "the reverse of the proposed outcome is already derivable");
        // Indifference on a derived strict pair keeps the derived fact; a
        // strict answer on a recorded indifference keeps the indifference.
        return *known;
    }
    if (!is_strict(proposed)) return proposed;
    const bool x_wins = proposed == Outcome::XBetter;
    const std::size_t u = x_wins ? q.x.value : q.y.value;
    const std::size_t v = x_wins ? q.y.value : q.x.value;
    if (kb.closure(q.c).conflicts_with_indifference(u, v)) return Outcome::Indifferent;
    return proposed;
}

std::string_view to_string(Vote v) {
    switch (v) {
        case Vote::PreferX: return "prefer_x";
        case Vote::PreferY: return "prefer_y";
        case Vote::Indifferent: return "indifferent";
        case Vote::Skip: return "skip";
    }
    return "?";
}

std::optional<Vote> parse_vote(std::string_view s) {
    if (s == "prefer_x") return Vote::PreferX;
    if (s == "prefer_y") return Vote::PreferY;
    if (s == "indifferent") return Vote::Indifferent;
    if (s == "skip") return Vote::Skip;
    return std::nullopt;
}

namespace {

std::optional<Outcome> vote_outcome(Vote v) {
    switch (v) {
        case Vote::PreferX: return Outcome::XBetter;
        case Vote::PreferY: return Outcome::YBetter;
        case Vote::Indifferent: return Outcome::Indifferent;
        case Vote::Skip: return std::nullopt;
    }
    return std::nullopt;
}

bool same_pair(const Question& a, const Question& b) {
    return a.c == b.c && ((a.x == b.x && a.y == b.y) || (a.x == b.y && a.y == b.x));
}

}  // namespace

ValidationResult filter_by_validation(std::vector<RespondentAnswers> answers,
                                      const std::vector<ValidationQuestion>& validation) {
    ValidationResult result;
    for (auto& worker : answers) {
        bool failed = false;
        for (const auto& r : worker.responses) {
            const auto given = vote_outcome(r.vote);
            if (!given) continue;
            for (const auto& v : validation) {
                if (!same_pair(r.question, v.question)) continue;
                const Outcome expected = r.question.x == v.question.x ? v.expected : flip(v.expected);
                if (*given != expected) failed = true;
            }
        }
        if (failed) {
            ++result.rejected;
        } else {
            result.retained.push_back(std::move(worker));
        }
    }
    return result;
}

std::vector<std::pair<Question, VoteTally>> tally_responses(const std::vector<RespondentAnswers>& answers) {
    std::map<Question, VoteTally> tallies;
    for (const auto& worker : answers) {
        for (const auto& r : worker.responses) {
            Question q = r.question;
            Vote v = r.vote;
            if (q.y < q.x) {
                q = q.reversed();
                if (v == Vote::PreferX) {
                    v = Vote::PreferY;
                } else if (v == Vote::PreferY) {
                    v = Vote::PreferX;
                }
            }
            auto& t = tallies[q];
            switch (v) {
                case Vote::PreferX: ++t.prefer_x; break;
                case Vote::PreferY: ++t.prefer_y; break;
                case Vote::Indifferent: ++t.indifferent; break;
                case Vote::Skip: ++t.skipped; break;
            }
        }
    }
    return {tallies.begin(), tallies.end()};
}

}  // namespace pareto
