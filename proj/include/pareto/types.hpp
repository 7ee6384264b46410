#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pareto {

struct ObjectId {
    std::uint32_t value = 0;
    friend constexpr auto operator<=>(ObjectId, ObjectId) = default;
};

struct CriterionId {
    std::uint32_t value = 0;
    friend constexpr auto operator<=>(CriterionId, CriterionId) = default;
};

/// Pairwise comparison of x and y on criterion c.  The orientation matters
/// for candidate checks: x is the object hypothesized to be dominated.
struct Question {
    ObjectId x;
    ObjectId y;
    CriterionId c;
    friend constexpr auto operator<=>(const Question&, const Question&) = default;

    Question reversed() const { return {y, x, c}; }
};

enum class Outcome : std::uint8_t { XBetter, YBetter, Indifferent };

/// The same outcome seen from the reversed question.
constexpr Outcome flip(Outcome o) {
    switch (o) {
        case Outcome::XBetter: return Outcome::YBetter;
        case Outcome::YBetter: return Outcome::XBetter;
        default: return Outcome::Indifferent;
    }
}

constexpr bool is_strict(Outcome o) { return o != Outcome::Indifferent; }

/// better >_c worse
struct Fact {
    ObjectId better;
    ObjectId worse;
    CriterionId c;
    friend constexpr auto operator<=>(const Fact&, const Fact&) = default;
};

enum class ErrorCode {
    InvalidArgument,
    DirectContradiction,
    AlreadyKnown,
    Exhausted,
    InsufficientVotes,
    Unresolvable,
    InvalidSpec,
    SessionTerminal,
    StaleQuestion,
    UnknownSession,
    CorruptSnapshot,
    IncompleteDataset,
    OracleMismatch,
    TooLarge,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Labels of the objects and criteria under comparison.  Indices are dense.
class Universe {
public:
    Universe() = default;
    Universe(std::vector<std::string> objects, std::vector<std::string> criteria);

    /// Anonymous universe with labels o0.. and c0..
    static Universe numbered(std::size_t objects, std::size_t criteria);

    std::size_t object_count() const { return objects_.size(); }
    std::size_t criterion_count() const { return criteria_.size(); }
    const std::string& object_label(ObjectId o) const { return objects_.at(o.value); }
    const std::string& criterion_label(CriterionId c) const { return criteria_.at(c.value); }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::string>& criteria() const { return criteria_; }

    std::optional<ObjectId> find_object(std::string_view label) const;
    std::optional<CriterionId> find_criterion(std::string_view label) const;

    /// |C| * n(n-1)/2, the number of questions asked by exhaustive comparison.
    std::uint64_t question_count() const;

private:
    std::vector<std::string> objects_;
    std::vector<std::string> criteria_;
};

std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view s);

/// "b>a (story)" style rendering.
std::string describe(const Universe& u, const Question& q, Outcome o);
std::string describe(const Universe& u, const Fact& f);

}  // namespace pareto

template <>
struct std::hash<pareto::Question> {
    std::size_t operator()(const pareto::Question& q) const noexcept {
        std::uint64_t h = q.x.value;
        h = h * 0x9E3779B97F4A7C15ULL + q.y.value;
        h = h * 0x9E3779B97F4A7C15ULL + q.c.value;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};
