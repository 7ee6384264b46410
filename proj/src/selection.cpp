#include "pareto/selection.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace pareto {

void StrategyKind::validate() const {
    if ((micro == MicroOrdering::RandomP || micro == MicroOrdering::FRQ) && !use_cq)
        throw Error(ErrorCode::InvalidArgument, "pair-based strategies need candidate questions");
}

std::string to_string(const StrategyKind& s) {
    switch (s.micro) {
        case MicroOrdering::BruteForce: return "bruteforce";
        case MicroOrdering::RandomP: return s.use_mo ? "randomp" : "randomp-mo";
        case MicroOrdering::FRQ: return s.use_mo ? "frq" : "frq-mo";
        case MicroOrdering::RandomQ: break;
    }
    if (s.use_cq && s.use_mo) return "randomq";
    return std::string(s.use_cq ? "+cq" : "-cq") + (s.use_mo ? "+mo" : "-mo");
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
    if (name == "bruteforce") return StrategyKind::brute_force();
    if (name == "randomq" || name == "+cq+mo") return StrategyKind::random_q();
    if (name == "randomp") return StrategyKind::random_p();
    if (name == "frq") return StrategyKind::frq();
    if (name == "randomp-mo") return StrategyKind{MicroOrdering::RandomP, true, false};
    if (name == "frq-mo") return StrategyKind{MicroOrdering::FRQ, true, false};
    if (name == "+cq-mo") return StrategyKind::ablation(true, false);
    if (name == "-cq+mo") return StrategyKind::ablation(false, true);
    if (name == "-cq-mo") return StrategyKind::ablation(false, false);
    return std::nullopt;
}

std::vector<StrategyKind> parse_strategy_list(std::string_view names) {
    std::vector<StrategyKind> out;
    std::size_t start = 0;
    while (start <= names.size()) {
        const std::size_t end = std::min(names.find(',', start), names.size());
        const auto token = names.substr(start, end - start);
        if (!token.empty()) {
            const auto s = parse_strategy(token);
            if (!s) throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(token) + "'");
            out.push_back(*s);
        }
        start = end + 1;
    }
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no strategy given");
    return out;
}

bool is_candidate(const KnowledgeBase& kb, const Partition& part, const Question& q) {
    return q.x != q.y && !kb.outcome_of(q) && part.status(q.x) == Status::Unknown &&
           !kb.beats_somewhere(q.x, q.y);
}

CandidateSets candidate_sets(const KnowledgeBase& kb, const Partition& part) {
    CandidateSets out;
    const auto n = static_cast<std::uint32_t>(kb.object_count());
    const auto nc = static_cast<std::uint32_t>(kb.criterion_count());
    for (std::uint32_t x = 0; x < n; ++x) {
        if (part.status(ObjectId{x}) != Status::Unknown) continue;
        for (std::uint32_t y = 0; y < n; ++y) {
            if (x == y || !kb.may_dominate(ObjectId{y}, ObjectId{x})) continue;
            auto& tier = part.status(ObjectId{y}) == Status::Dominated ? out.q2 : out.q1;
            for (std::uint32_t c = 0; c < nc; ++c) {
                const Question q{ObjectId{x}, ObjectId{y}, CriterionId{c}};
                if (!kb.outcome_of(q)) tier.push_back(q);
            }
        }
    }
    return out;
}

namespace {

std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

const std::vector<Question>& active_tier(const CandidateSets& cands) {
    if (!cands.q1.empty()) return cands.q1;
    if (!cands.q2.empty()) return cands.q2;
    throw Error(ErrorCode::Exhausted, "no candidate question left");
}

bool same_pair(const Question& q, ObjectId a, ObjectId b) {
    return (q.x == a && q.y == b) || (q.x == b && q.y == a);
}

}  // namespace

Question select_random_q(const CandidateSets& cands, Rng& rng) {
    const auto& tier = active_tier(cands);
    return tier[uniform_index(rng, tier.size())];
}

std::pair<Question, PairState> select_random_p(const std::optional<PairState>& state,
                                               const CandidateSets& cands, Rng& rng) {
    auto pair_questions = [&](ObjectId a, ObjectId b) {
        std::vector<Question> qs;
        for (const auto* tier : {&cands.q1, &cands.q2})
            for (const auto& q : *tier)
                if (same_pair(q, a, b)) qs.push_back(q);
        return qs;
    };
    auto finish = [&](ObjectId a, ObjectId b, std::vector<Question> qs) {
        const Question pick = qs[uniform_index(rng, qs.size())];
        PairState next{a, b, {}};
        for (const auto& q : qs)
            if (q.x == pick.x && q.c != pick.c) next.remaining.push_back(q.c);
        return std::pair{pick, next};
    };

    if (state) {
        auto qs = pair_questions(state->x, state->y);
        if (!qs.empty()) return finish(state->x, state->y, std::move(qs));
    }
    const auto& tier = active_tier(cands);
    std::vector<std::pair<ObjectId, ObjectId>> pairs;
    for (const auto& q : tier)
        if (pairs.empty() || pairs.back() != std::pair{q.x, q.y}) pairs.emplace_back(q.x, q.y);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    const auto [a, b] = pairs[uniform_index(rng, pairs.size())];
    return finish(a, b, pair_questions(a, b));
}

std::size_t dominated_count(const KnowledgeBase& kb, ObjectId x) {
    std::size_t d = 0;
    for (std::uint32_t y = 0; y < kb.object_count(); ++y)
        if (y != x.value && kb.dominates(x, ObjectId{y})) ++d;
    return d;
}

long frq_score(const KnowledgeBase& kb, ObjectId x, ObjectId y, CriterionId c) {
    const auto& cl = kb.closure(c);
    auto standing = [&](ObjectId z) {
        return static_cast<long>(cl.beaten_count(z.value)) + static_cast<long>(cl.indifferent_count(z.value)) -
               static_cast<long>(cl.beats_count(z.value));
    };
    return standing(y) - standing(x);
}

std::vector<CriterionId> frq_order(const KnowledgeBase& kb, ObjectId x, ObjectId y,
                                   std::vector<CriterionId> criteria) {
    std::vector<std::pair<long, CriterionId>> scored;
    scored.reserve(criteria.size());
    for (auto c : criteria) scored.emplace_back(frq_score(kb, x, y, c), c);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; i < scored.size(); ++i) criteria[i] = scored[i].second;
    return criteria;
}

std::pair<Question, PairState> frq_select(const KnowledgeBase& kb, const CandidateSets& cands) {
    const auto& tier = active_tier(cands);
    std::map<std::pair<ObjectId, ObjectId>, std::vector<CriterionId>> pairs;
    for (const auto& q : tier) pairs[{q.x, q.y}].push_back(q.c);

    std::vector<std::size_t> d(kb.object_count());
    for (std::uint32_t o = 0; o < kb.object_count(); ++o) d[o] = dominated_count(kb, ObjectId{o});

    using Key = std::tuple<std::size_t, std::size_t, long, std::uint32_t, std::uint32_t>;
    std::optional<Key> best;
    std::pair<ObjectId, ObjectId> chosen;
    for (const auto& [xy, crit] : pairs) {
        const Key key{crit.size(), d[xy.first.value], -static_cast<long>(d[xy.second.value]),
                      xy.first.value, xy.second.value};
        if (!best || key < *best) {
            best = key;
            chosen = xy;
        }
    }
    PairState state{chosen.first, chosen.second, frq_order(kb, chosen.first, chosen.second, pairs[chosen])};
    return {Question{state.x, state.y, state.remaining.front()}, state};
}

}  // namespace pareto
