#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pareto/bit_matrix.hpp"
#include "pareto/types.hpp"

namespace pareto {

/// Strict better-than facts of one criterion, kept transitively closed, plus
/// the object pairs recorded as indifferent.  Indifference is never derived.
class PreferenceClosure {
public:
    PreferenceClosure() = default;
    explicit PreferenceClosure(std::size_t objects);

    std::size_t object_count() const { return better_.size(); }

    bool better(std::size_t u, std::size_t v) const { return better_.test(u, v); }
    bool indifferent(std::size_t u, std::size_t v) const { return indiff_.test(u, v); }

    /// XBetter if x > y, YBetter if y > x, Indifferent if recorded, else nullopt.
    std::optional<Outcome> relation(std::size_t x, std::size_t y) const;

    /// True when adding u > v would derive a strict fact over a pair that was
    /// recorded indifferent.
    bool conflicts_with_indifference(std::size_t u, std::size_t v) const;

    /// Adds u > v and everything it implies.  fn(p, s) is called once for each
    /// strict pair p > s that was not derivable before, including (u, v).
    /// Caller guarantees u != v, and that neither v > u nor a conflicting
    /// indifference is present.
    template <typename Fn>
    std::size_t insert_strict(std::size_t u, std::size_t v, Fn&& fn);

    void insert_indifferent(std::size_t u, std::size_t v);

    /// |{w : w > z}|
    std::size_t beaten_count(std::size_t z) const { return beaten_count_[z]; }
    /// |{w : z > w}|
    std::size_t beats_count(std::size_t z) const { return beats_count_[z]; }
    /// |{w : z ~ w}|
    std::size_t indifferent_count(std::size_t z) const { return indiff_count_[z]; }

    std::size_t strict_pair_count() const { return strict_pairs_; }
    std::size_t indifferent_pair_count() const { return indiff_pairs_; }

    const BitMatrix& better_rows() const { return better_; }
    const BitMatrix& worse_rows() const { return worse_; }
    const BitMatrix& indifferent_rows() const { return indiff_; }

private:
    BitMatrix better_;  // row u: {v : u > v}
    BitMatrix worse_;   // row v: {u : u > v}
    BitMatrix indiff_;  // symmetric
    std::vector<std::uint32_t> beaten_count_;
    std::vector<std::uint32_t> beats_count_;
    std::vector<std::uint32_t> indiff_count_;
    std::size_t strict_pairs_ = 0;
    std::size_t indiff_pairs_ = 0;
    std::vector<BitMatrix::Word> scratch_succ_;
    std::vector<BitMatrix::Word> scratch_pred_;
};

struct AskedOutcome {
    Question question;
    Outcome outcome;
};

/// R(Q): the recorded question outcomes, and R+(Q): their per-criterion
/// transitive closure.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    KnowledgeBase(std::size_t objects, std::size_t criteria);

    std::size_t object_count() const { return objects_; }
    std::size_t criterion_count() const { return closures_.size(); }

    std::optional<Outcome> outcome_of(ObjectId x, ObjectId y, CriterionId c) const {
        return closures_[c.value].relation(x.value, y.value);
    }
    std::optional<Outcome> outcome_of(const Question& q) const { return outcome_of(q.x, q.y, q.c); }

    /// y dominates x: y is better on some criterion and x is better on none,
    /// every criterion being known as either y > x or x ~ y.
    bool dominates(ObjectId y, ObjectId x) const;

    /// False once y can no longer come to dominate x.
    bool may_dominate(ObjectId y, ObjectId x) const;

    /// x > y on at least one criterion.
    bool beats_somewhere(ObjectId x, ObjectId y) const;

    /// Records a fresh outcome and returns the strict facts that became
    /// derivable through it (the recorded fact itself is not included).
    std::vector<Fact> record_outcome(const Question& q, Outcome o);

    /// Same as above; fn(Fact) is called for every new strict fact including
    /// the recorded one.  Returns the number of derived facts.
    template <typename Fn>
    std::size_t record_outcome(const Question& q, Outcome o, Fn&& fn);

    /// Throws DirectContradiction / AlreadyKnown when q cannot take outcome o.
    void check_recordable(const Question& q, Outcome o) const;

    const PreferenceClosure& closure(CriterionId c) const { return closures_.at(c.value); }
    const std::vector<AskedOutcome>& asked() const { return asked_; }
    std::uint64_t asked_count() const { return asked_.size(); }
    std::uint64_t derived_count() const { return derived_; }

private:
    void check_question(const Question& q) const;

    std::size_t objects_ = 0;
    std::vector<PreferenceClosure> closures_;
    std::vector<AskedOutcome> asked_;
    std::uint64_t derived_ = 0;
};

enum class Status : std::uint8_t { Unknown, Confirmed, Dominated };

/// O_ok (confirmed Pareto-optimal), O_? (undetermined), O_x (dominated).
class Partition {
public:
    Partition() = default;
    explicit Partition(std::size_t objects);

    static Partition from_sets(std::size_t objects, const std::vector<ObjectId>& confirmed,
                               const std::vector<ObjectId>& dominated);

    std::size_t object_count() const { return status_.size(); }
    Status status(ObjectId o) const { return status_[o.value]; }
    void set(ObjectId o, Status s);

    std::vector<ObjectId> confirmed() const { return members(Status::Confirmed); }
    std::vector<ObjectId> unknown() const { return members(Status::Unknown); }
    std::vector<ObjectId> dominated() const { return members(Status::Dominated); }

    std::size_t confirmed_count() const { return counts_[1]; }
    std::size_t unknown_count() const { return counts_[0]; }
    std::size_t dominated_count() const { return counts_[2]; }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<ObjectId> members(Status s) const;

    std::vector<Status> status_;
    std::size_t counts_[3] = {0, 0, 0};
};

Partition compute_partition(const KnowledgeBase& kb);

inline bool is_terminal(const Partition& p) { return p.unknown_count() == 0; }

// ---------------------------------------------------------------------------

template <typename Fn>
std::size_t PreferenceClosure::insert_strict(std::size_t u, std::size_t v, Fn&& fn) {
    const std::size_t words = better_.words_per_row();
    scratch_succ_.assign(better_.row(v).begin(), better_.row(v).end());
    scratch_succ_[v / 64] |= BitMatrix::Word{1} << (v % 64);
    scratch_pred_.assign(worse_.row(u).begin(), worse_.row(u).end());
    scratch_pred_[u / 64] |= BitMatrix::Word{1} << (u % 64);
    // A predecessor that already beats v already beats everything below v.
    const auto beats_v = worse_.row(v);
    for (std::size_t w = 0; w < words; ++w) scratch_pred_[w] &= ~beats_v[w];

    std::size_t added = 0;
    for_each_bit(std::span<const BitMatrix::Word>(scratch_pred_), [&](std::size_t p) {
        auto row = better_.row(p);
        for (std::size_t w = 0; w < words; ++w) {
            BitMatrix::Word fresh = scratch_succ_[w] & ~row[w];
            if (!fresh) continue;
            row[w] |= fresh;
            while (fresh) {
                const std::size_t s = w * 64 + static_cast<std::size_t>(std::countr_zero(fresh));
                fresh &= fresh - 1;
                worse_.set(s, p);
                ++beats_count_[p];
                ++beaten_count_[s];
                ++added;
                fn(p, s);
            }
        }
    });
    strict_pairs_ += added;
    return added;
}

template <typename Fn>
std::size_t KnowledgeBase::record_outcome(const Question& q, Outcome o, Fn&& fn) {
    check_recordable(q, o);
    asked_.push_back({q, o});
    auto& closure = closures_[q.c.value];
    if (o == Outcome::Indifferent) {
        closure.insert_indifferent(q.x.value, q.y.value);
        return 0;
    }
    const auto [u, v] = o == Outcome::XBetter ? std::pair{q.x.value, q.y.value}
                                              : std::pair{q.y.value, q.x.value};
    const std::size_t added = closure.insert_strict(u, v, [&](std::size_t p, std::size_t s) {
        fn(Fact{ObjectId{static_cast<std::uint32_t>(p)}, ObjectId{static_cast<std::uint32_t>(s)}, q.c});
    });
    derived_ += added - 1;
    return added - 1;
}

}  // namespace pareto
