#include "pareto/order.hpp"

#include <string>

namespace pareto {

PreferenceClosure::PreferenceClosure(std::size_t objects)
    : better_(objects),
      worse_(objects),
      indiff_(objects),
      beaten_count_(objects, 0),
      beats_count_(objects, 0),
      indiff_count_(objects, 0) {}

std::optional<Outcome> PreferenceClosure::relation(std::size_t x, std::size_t y) const {
    if (better_.test(x, y)) return Outcome::XBetter;
    if (better_.test(y, x)) return Outcome::YBetter;
    if (indiff_.test(x, y)) return Outcome::Indifferent;
    return std::nullopt;
}

bool PreferenceClosure::conflicts_with_indifference(std::size_t u, std::size_t v) const {
    // New pairs are (pred(u) + u) x (succ(v) + v); any of them recorded
    // indifferent is a collision.
    const auto succ = better_.row(v);
    auto hits = [&](std::size_t p) {
        const auto ind = indiff_.row(p);
        if (ind[v / 64] >> (v % 64) & 1U) return true;
        for (std::size_t w = 0; w < succ.size(); ++w)
            if (ind[w] & succ[w]) return true;
        return false;
    };
    if (hits(u)) return true;
    // Predecessors already beating v only gain pairs that are strict already.
    const auto preds = worse_.row(u);
    const auto beats_v = worse_.row(v);
    for (std::size_t w = 0; w < preds.size(); ++w) {
        BitMatrix::Word bits = preds[w] & ~beats_v[w];
        while (bits) {
            if (hits(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)))) return true;
            bits &= bits - 1;
        }
    }
    return false;
}

void PreferenceClosure::insert_indifferent(std::size_t u, std::size_t v) {
    if (indiff_.test(u, v)) return;
    indiff_.set(u, v);
    indiff_.set(v, u);
    ++indiff_count_[u];
    ++indiff_count_[v];
    ++indiff_pairs_;
}

KnowledgeBase::KnowledgeBase(std::size_t objects, std::size_t criteria) : objects_(objects) {
    if (criteria == 0) throw Error(ErrorCode::InvalidSpec, "knowledge base needs at least one criterion");
    closures_.reserve(criteria);
    for (std::size_t c = 0; c < criteria; ++c) closures_.emplace_back(objects);
}

void KnowledgeBase::check_question(const Question& q) const {
    if (q.x.value >= objects_ || q.y.value >= objects_ || q.c.value >= closures_.size())
        throw Error(ErrorCode::InvalidArgument, "question refers to an unknown object or criterion");
    if (q.x == q.y) throw Error(ErrorCode::InvalidArgument, "question compares an object with itself");
}

void KnowledgeBase::check_recordable(const Question& q, Outcome o) const {
    check_question(q);
    const auto known = outcome_of(q);
    if (known) {
        if (*known == o) throw Error(ErrorCode::AlreadyKnown, "outcome is already derivable");
        throw Error(ErrorCode::DirectContradiction, "outcome contradicts a derivable fact");
    }
    if (is_strict(o)) {
        const auto& closure = closures_[q.c.value];
        const bool x_wins = o == Outcome::XBetter;
        const std::size_t u = x_wins ? q.x.value : q.y.value;
        const std::size_t v = x_wins ? q.y.value : q.x.value;
        if (closure.conflicts_with_indifference(u, v))
            throw Error(ErrorCode::DirectContradiction,
                        "outcome would derive a strict fact over a recorded indifference");
    }
}

std::vector<Fact> KnowledgeBase::record_outcome(const Question& q, Outcome o) {
    std::vector<Fact> derived;
    record_outcome(q, o, [&](const Fact& f) { derived.push_back(f); });
    // The recorded fact itself is reported by the callback too; drop it.
    if (is_strict(o)) {
        const Fact direct = o == Outcome::XBetter ? Fact{q.x, q.y, q.c} : Fact{q.y, q.x, q.c};
        std::erase(derived, direct);
    }
    return derived;
}

bool KnowledgeBase::dominates(ObjectId y, ObjectId x) const {
    bool strictly = false;
    for (const auto& cl : closures_) {
        if (cl.better(y.value, x.value)) {
            strictly = true;
        } else if (!cl.indifferent(x.value, y.value)) {
            return false;
        }
    }
    return strictly;
}

bool KnowledgeBase::beats_somewhere(ObjectId x, ObjectId y) const {
    for (const auto& cl : closures_)
        if (cl.better(x.value, y.value)) return true;
    return false;
}

bool KnowledgeBase::may_dominate(ObjectId y, ObjectId x) const {
    return !beats_somewhere(x, y) && !dominates(x, y);
}

Partition::Partition(std::size_t objects) : status_(objects, Status::Unknown) {
    counts_[0] = objects;
}

Partition Partition::from_sets(std::size_t objects, const std::vector<ObjectId>& confirmed,
                               const std::vector<ObjectId>& dominated) {
    Partition p(objects);
    for (auto o : confirmed) {
        if (o.value >= objects || p.status(o) != Status::Unknown)
            throw Error(ErrorCode::InvalidArgument, "partition sets must be disjoint subsets of O");
        p.set(o, Status::Confirmed);
    }
    for (auto o : dominated) {
        if (o.value >= objects || p.status(o) != Status::Unknown)
            throw Error(ErrorCode::InvalidArgument, "partition sets must be disjoint subsets of O");
        p.set(o, Status::Dominated);
    }
    return p;
}

void Partition::set(ObjectId o, Status s) {
    auto& cur = status_.at(o.value);
    --counts_[static_cast<int>(cur)];
    cur = s;
    ++counts_[static_cast<int>(cur)];
}

std::vector<ObjectId> Partition::members(Status s) const {
    std::vector<ObjectId> out;
    for (std::size_t i = 0; i < status_.size(); ++i)
        if (status_[i] == s) out.push_back(ObjectId{static_cast<std::uint32_t>(i)});
    return out;
}

Partition compute_partition(const KnowledgeBase& kb) {
    const std::size_t n = kb.object_count();
    const std::size_t nc = kb.criterion_count();
    Partition part(n);
    for (std::uint32_t xi = 0; xi < n; ++xi) {
        const ObjectId x{xi};
        bool dominated = false;
        bool settled_all = true;
        for (std::uint32_t yi = 0; yi < n && !dominated; ++yi) {
            if (yi == xi) continue;
            const ObjectId y{yi};
            if (kb.dominates(y, x)) {
                dominated = true;
                break;
            }
            if (!settled_all) continue;
            bool beats = false;
            bool all_indifferent = true;
            for (std::uint32_t c = 0; c < nc; ++c) {
                const auto& cl = kb.closure(CriterionId{c});
                if (cl.better(xi, yi)) beats = true;
                if (!cl.indifferent(xi, yi)) all_indifferent = false;
            }
            if (!beats && !all_indifferent) settled_all = false;
        }
        if (dominated) {
            part.set(x, Status::Dominated);
        } else if (settled_all) {
            part.set(x, Status::Confirmed);
        }
    }
    return part;
}

}  // namespace pareto
