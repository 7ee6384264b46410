#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pareto/order.hpp"
#include "pareto/types.hpp"

namespace pareto {

using Rng = std::mt19937_64;

enum class MicroOrdering : std::uint8_t { BruteForce, RandomQ, RandomP, FRQ };

/// Micro-ordering heuristic plus the candidate-question (CQ) and
/// macro-ordering (MO) ablation switches.
struct StrategyKind {
    MicroOrdering micro = MicroOrdering::FRQ;
    bool use_cq = true;
    bool use_mo = true;

    static StrategyKind brute_force() { return {MicroOrdering::BruteForce, false, false}; }
    static StrategyKind random_q() { return {MicroOrdering::RandomQ, true, true}; }
    static StrategyKind random_p() { return {MicroOrdering::RandomP, true, true}; }
    static StrategyKind frq() { return {MicroOrdering::FRQ, true, true}; }
    /// RandomQ-style uniform draw with the given switches.
    static StrategyKind ablation(bool cq, bool mo) { return {MicroOrdering::RandomQ, cq, mo}; }

    /// Throws InvalidArgument for RandomP/FRQ without candidate questions.
    void validate() const;

    friend bool operator==(const StrategyKind&, const StrategyKind&) = default;
};

/// Canonical names: bruteforce, randomq, randomp, frq, +cq-mo, -cq+mo, -cq-mo
/// ("+cq+mo" is accepted as randomq).
std::string to_string(const StrategyKind& s);
std::optional<StrategyKind> parse_strategy(std::string_view name);
/// Comma separated list; throws InvalidArgument on an unknown name.
std::vector<StrategyKind> parse_strategy_list(std::string_view names);

/// Candidate questions split by macro-ordering tier: q1 holds those whose y
/// is not dominated, q2 those whose y is.
struct CandidateSets {
    std::vector<Question> q1;
    std::vector<Question> q2;

    bool empty() const { return q1.empty() && q2.empty(); }
    std::size_t size() const { return q1.size() + q2.size(); }
};

/// x ?c y is a candidate when its outcome is unknown, x is undetermined and y
/// can still come to dominate x.
bool is_candidate(const KnowledgeBase& kb, const Partition& part, const Question& q);

/// Full recomputation; sorted by (x, y, c).
CandidateSets candidate_sets(const KnowledgeBase& kb, const Partition& part);

/// Objects the current pair keeps being compared on.
struct PairState {
    ObjectId x;
    ObjectId y;
    std::vector<CriterionId> remaining;
};

Question select_random_q(const CandidateSets& cands, Rng& rng);

/// Sticks with state's pair while it has candidate questions in either
/// orientation; otherwise draws a fresh pair uniformly (q1 pairs first).
std::pair<Question, PairState> select_random_p(const std::optional<PairState>& state,
                                               const CandidateSets& cands, Rng& rng);

/// Number of objects x dominates under the current knowledge.
std::size_t dominated_count(const KnowledgeBase& kb, ObjectId x);

/// Likelihood score that x beats y on c; larger is asked first.
long frq_score(const KnowledgeBase& kb, ObjectId x, ObjectId y, CriterionId c);

/// Orders criteria by decreasing frq_score, ties by criterion index.
std::vector<CriterionId> frq_order(const KnowledgeBase& kb, ObjectId x, ObjectId y,
                                   std::vector<CriterionId> criteria);

/// Fresh FRQ pick: the pair with the fewest remaining candidate questions
/// (q1 tier first), ties by fewest objects dominated by x, then most
/// dominated by y, then lowest (x, y).
std::pair<Question, PairState> frq_select(const KnowledgeBase& kb, const CandidateSets& cands);

}  // namespace pareto
