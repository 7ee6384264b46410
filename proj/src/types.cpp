#include "pareto/types.hpp"

#include <set>

namespace pareto {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DirectContradiction: return "DirectContradiction";
        case ErrorCode::AlreadyKnown: return "AlreadyKnown";
        case ErrorCode::Exhausted: return "Exhausted";
        case ErrorCode::InsufficientVotes: return "InsufficientVotes";
        case ErrorCode::Unresolvable: return "Unresolvable";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::SessionTerminal: return "SessionTerminal";
        case ErrorCode::StaleQuestion: return "StaleQuestion";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::CorruptSnapshot: return "CorruptSnapshot";
        case ErrorCode::IncompleteDataset: return "IncompleteDataset";
        case ErrorCode::OracleMismatch: return "OracleMismatch";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Universe::Universe(std::vector<std::string> objects, std::vector<std::string> criteria)
    : objects_(std::move(objects)), criteria_(std::move(criteria)) {
    if (objects_.empty()) throw Error(ErrorCode::InvalidSpec, "at least one object is required");
    if (criteria_.empty()) throw Error(ErrorCode::InvalidSpec, "at least one criterion is required");
    auto check_unique = [](const std::vector<std::string>& labels, const char* what) {
        std::set<std::string_view> seen;
        for (const auto& l : labels) {
            if (l.empty()) throw Error(ErrorCode::InvalidSpec, std::string("empty ") + what + " label");
            if (!seen.insert(l).second)
                throw Error(ErrorCode::InvalidSpec, std::string("duplicate ") + what + " label '" + l + "'");
        }
    };
    check_unique(objects_, "object");
    check_unique(criteria_, "criterion");
}

Universe Universe::numbered(std::size_t objects, std::size_t criteria) {
    std::vector<std::string> o, c;
    o.reserve(objects);
    for (std::size_t i = 0; i < objects; ++i) o.push_back("o" + std::to_string(i));
    for (std::size_t i = 0; i < criteria; ++i) c.push_back("c" + std::to_string(i));
    return Universe(std::move(o), std::move(c));
}

std::optional<ObjectId> Universe::find_object(std::string_view label) const {
    for (std::size_t i = 0; i < objects_.size(); ++i)
        if (objects_[i] == label) return ObjectId{static_cast<std::uint32_t>(i)};
    return std::nullopt;
}

std::optional<CriterionId> Universe::find_criterion(std::string_view label) const {
    for (std::size_t i = 0; i < criteria_.size(); ++i)
        if (criteria_[i] == label) return CriterionId{static_cast<std::uint32_t>(i)};
    return std::nullopt;
}

std::uint64_t Universe::question_count() const {
    const std::uint64_t n = objects_.size();
    return criteria_.size() * (n * (n - 1) / 2);
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::XBetter: return "x_better";
        case Outcome::YBetter: return "y_better";
        case Outcome::Indifferent: return "indifferent";
    }
    return "?";
}

std::optional<Outcome> parse_outcome(std::string_view s) {
    if (s == "x_better") return Outcome::XBetter;
    if (s == "y_better") return Outcome::YBetter;
    if (s == "indifferent") return Outcome::Indifferent;
    return std::nullopt;
}

std::string describe(const Universe& u, const Question& q, Outcome o) {
    const std::string x = "[" + u.object_label(q.x) + "]";
    const std::string& y = u.object_label(q.y);
    std::string rel;
    switch (o) {
        case Outcome::XBetter: rel = x + ">" + y; break;
        case Outcome::YBetter: rel = y + ">" + x; break;
        case Outcome::Indifferent: rel = x + "~" + y; break;
    }
    return rel + " (" + u.criterion_label(q.c) + ")";
}

std::string describe(const Universe& u, const Fact& f) {
    return u.object_label(f.better) + ">" + u.object_label(f.worse) + " (" + u.criterion_label(f.c) + ")";
}

}  // namespace pareto
