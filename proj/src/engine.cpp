#include "pareto/engine.hpp"

#include <algorithm>
#include <limits>

#include "pareto/aggregation.hpp"

namespace pareto {

namespace {

constexpr std::uint16_t make_code(int tier, std::uint32_t size) {
    return static_cast<std::uint16_t>((tier << 8) | size);
}

}  // namespace

ElicitationState::ElicitationState(std::size_t objects, std::size_t criteria, IndexOptions index)
    : n_(objects),
      nc_(criteria),
      index_(index),
      kb_(objects, criteria),
      part_(objects),
      unknown_(objects * objects, 0),
      beats_any_(objects),
      dominance_(objects),
      settled_(objects),
      settled_count_(objects, 0),
      d_(objects, 0) {
    if (criteria > 255) throw Error(ErrorCode::TooLarge, "at most 255 criteria are supported");
    if (objects > 65535) throw Error(ErrorCode::TooLarge, "at most 65535 objects are supported");
    for (std::size_t x = 0; x < n_; ++x)
        for (std::size_t y = 0; y < n_; ++y)
            if (x != y) unknown_[x * n_ + y] = static_cast<std::uint8_t>(nc_);
    dominated_mask_.assign((n_ + 63) / 64, 0);

    if (index_.ordered) {
        pair_code_.assign(n_ * n_, 0);
        ordered_ = TieredPool(n_ * n_);
        open_rows_.assign(nc_ + 1, BitMatrix());
        for (std::size_t s = 1; s <= nc_; ++s) open_rows_[s] = BitMatrix(n_);
        row_open_.assign((nc_ + 1) * 2 * n_, 0);
    }
    if (index_.unordered) {
        upair_code_.assign(n_ * n_, 0);
        unordered_ = TieredPool(n_ * n_);
    }
    for (std::size_t x = 0; x < n_; ++x)
        for (std::size_t y = 0; y < n_; ++y) {
            if (x == y) continue;
            refresh_ordered(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
            if (x < y) refresh_unordered(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
        }
    // A lone object has nobody to be dominated by.
    if (n_ == 1) part_.set(ObjectId{0}, Status::Confirmed);
}

std::vector<CriterionId> ElicitationState::unknown_criteria_list(ObjectId x, ObjectId y) const {
    std::vector<CriterionId> out;
    for (std::uint32_t c = 0; c < nc_; ++c)
        if (!kb_.outcome_of(x, y, CriterionId{c})) out.push_back(CriterionId{c});
    return out;
}

ElicitationState::Update ElicitationState::record(const Question& q, Outcome o, std::vector<Fact>* derived_out) {
    Update upd;
    touched_.clear();
    const bool strict = is_strict(o);
    upd.derived = kb_.record_outcome(q, o, [&](const Fact& f) {
        touched_.emplace_back(f.better.value, f.worse.value);
        if (derived_out && !(f.c == q.c && ((f.better == q.x && f.worse == q.y) || (f.better == q.y && f.worse == q.x))))
            derived_out->push_back(f);
    });
    if (!strict) touched_.emplace_back(q.x.value, q.y.value);

    for (const auto& [a, b] : touched_) {
        --unknown_[a * n_ + b];
        --unknown_[b * n_ + a];
        if (strict) beats_any_.set(a, b);
    }
    for (const auto& [a, b] : touched_) recheck_pair(a, b, upd);

    if (index_.ordered || index_.unordered) {
        for (const auto& [a, b] : touched_) {
            refresh_ordered(a, b);
            refresh_ordered(b, a);
            refresh_unordered(std::min(a, b), std::max(a, b));
        }
        for (auto z : upd.newly_dominated) refresh_object(z.value);
        for (auto z : upd.newly_confirmed) refresh_object(z.value);
    }
    return upd;
}

// a beats b on something now, or a and b just became fully known: settles
// the ordered pairs (a, b) and (b, a) and may establish dominance.
void ElicitationState::recheck_pair(std::uint32_t a, std::uint32_t b, Update& upd) {
    auto settle = [&](std::uint32_t x, std::uint32_t y) {
        // Whether y dominates x is decided.
        if (settled_.test(x, y)) return;
        settled_.set(x, y);
        if (++settled_count_[x] == n_ - 1 && part_.status(ObjectId{x}) == Status::Unknown) {
            set_status(x, Status::Confirmed);
            upd.newly_confirmed.push_back(ObjectId{x});
        }
    };
    auto mark_dominated = [&](std::uint32_t winner, std::uint32_t loser) {
        if (dominance_.test(winner, loser)) return;
        dominance_.set(winner, loser);
        ++d_[winner];
        settle(loser, winner);
        if (part_.status(ObjectId{loser}) != Status::Dominated) {
            set_status(loser, Status::Dominated);
            upd.newly_dominated.push_back(ObjectId{loser});
        }
    };

    for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        // (x, y): may y dominate x?
        if (settled_.test(x, y)) continue;
        if (beats_any_.test(x, y)) {
            settle(x, y);
        } else if (unknown_[x * n_ + y] == 0) {
            if (beats_any_.test(y, x)) {
                mark_dominated(y, x);
            } else {
                settle(x, y);  // indifferent everywhere
            }
        }
    }
}

void ElicitationState::set_status(std::uint32_t z, Status s) {
    part_.set(ObjectId{z}, s);
    if (s == Status::Dominated) dominated_mask_[z / 64] |= BitMatrix::Word{1} << (z % 64);
}

void ElicitationState::refresh_ordered(std::uint32_t x, std::uint32_t y) {
    if (!index_.ordered) return;
    const std::size_t idx = x * n_ + y;
    std::uint16_t want = 0;
    const std::uint32_t size = unknown_[idx];
    if (size > 0 && part_.status(ObjectId{x}) == Status::Unknown && !beats_any_.test(x, y))
        want = make_code(part_.status(ObjectId{y}) == Status::Dominated ? 2 : 1, size);
    const std::uint16_t had = pair_code_[idx];
    if (had == want) return;
    if (had) {
        const int tier = (had >> 8) - 1;
        const std::uint32_t s = had & 0xFF;
        ordered_.erase(tier, static_cast<std::uint32_t>(idx));
        open_rows_[s].reset(x, y);
        --row_open_[(s * 2 + tier) * n_ + x];
        question_count_[tier] -= s;
    }
    if (want) {
        const int tier = (want >> 8) - 1;
        ordered_.insert(tier, static_cast<std::uint32_t>(idx));
        open_rows_[size].set(x, y);
        ++row_open_[(size * 2 + tier) * n_ + x];
        question_count_[tier] += size;
    }
    pair_code_[idx] = want;
}

void ElicitationState::refresh_unordered(std::uint32_t a, std::uint32_t b) {
    if (!index_.unordered) return;
    const std::size_t idx = a * n_ + b;
    const std::uint32_t size = unknown_[idx];
    std::uint16_t want = 0;
    if (size > 0) {
        const bool any_dominated = part_.status(ObjectId{a}) == Status::Dominated ||
                                   part_.status(ObjectId{b}) == Status::Dominated;
        want = make_code(any_dominated ? 2 : 1, size);
    }
    const std::uint16_t had = upair_code_[idx];
    if (had == want) return;
    if (had) {
        const int tier = (had >> 8) - 1;
        unordered_.erase(tier, static_cast<std::uint32_t>(idx));
        unknown_count_[tier] -= had & 0xFF;
    }
    if (want) {
        const int tier = (want >> 8) - 1;
        unordered_.insert(tier, static_cast<std::uint32_t>(idx));
        unknown_count_[tier] += size;
    }
    upair_code_[idx] = want;
}

void ElicitationState::refresh_object(std::uint32_t z) {
    for (std::uint32_t w = 0; w < n_; ++w) {
        if (w == z) continue;
        refresh_ordered(z, w);
        refresh_ordered(w, z);
        refresh_unordered(std::min(z, w), std::max(z, w));
    }
}

// ---------------------------------------------------------------------------

std::string_view to_string(EntrySource s) {
    switch (s) {
        case EntrySource::Asked: return "asked";
        case EntrySource::Derived: return "derived";
        case EntrySource::Resolved: return "resolved";
    }
    return "?";
}

namespace {

IndexOptions indexes_for(const StrategyKind& s) {
    IndexOptions opt;
    opt.ordered = s.use_cq;
    opt.unordered = !s.use_cq && s.micro == MicroOrdering::RandomQ;
    return opt;
}

std::size_t uniform_below(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

Elicitation::Elicitation(Universe universe, StrategyKind strategy, std::uint64_t seed, EngineOptions options)
    : state_((strategy.validate(), universe.object_count()), universe.criterion_count(), indexes_for(strategy)),
      options_(options),
      rng_(seed) {
    transcript_.universe = std::move(universe);
    transcript_.strategy = strategy;
    transcript_.seed = seed;
    transcript_.final_partition = state_.partition();
}

bool Elicitation::finished() const {
    if (transcript_.strategy.micro == MicroOrdering::BruteForce)
        return selector_.brute_force_cursor >= transcript_.universe.question_count() && !pending_;
    return is_terminal(state_.partition());
}

std::optional<Question> Elicitation::next_question() {
    if (pending_) return pending_;
    if (options_.verify) {
        check_invariants();
    } else if (state_.index_options().ordered) {
        if ((state_.candidate_count() == 0) != is_terminal(state_.partition())) ++transcript_.termination_mismatches;
    }
    if (finished()) return std::nullopt;
    pending_ = select();
    return pending_;
}

Question Elicitation::select() {
    const auto& s = transcript_.strategy;
    switch (s.micro) {
        case MicroOrdering::BruteForce: return select_brute_force();
        case MicroOrdering::RandomQ:
            return s.use_cq ? select_uniform_candidate(s.use_mo) : select_uniform_unknown(s.use_mo);
        case MicroOrdering::RandomP: return select_random_pair();
        case MicroOrdering::FRQ: return select_frq();
    }
    throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

Question Elicitation::select_brute_force() {
    const Question q{ObjectId{bf_x_}, ObjectId{bf_y_}, CriterionId{bf_c_}};
    ++selector_.brute_force_cursor;
    if (++bf_c_ == state_.criterion_count()) {
        bf_c_ = 0;
        if (++bf_y_ == state_.object_count()) {
            ++bf_x_;
            bf_y_ = bf_x_ + 1;
        }
    }
    return q;
}

namespace {

// Draws a pair id from the active tier(s), accepting it with probability
// size / criteria so that every unknown question is equally likely.
template <typename SizeOf>
std::uint32_t weighted_pick(const TieredPool& pool, bool macro, std::size_t criteria, Rng& rng, SizeOf size_of) {
    const std::size_t first = pool.size(0);
    const std::size_t second = pool.size(1);
    const bool only_first = macro && first > 0;
    const std::size_t total = only_first ? first : (macro ? second : first + second);
    if (total == 0) throw Error(ErrorCode::Exhausted, "no question left to ask");
    std::uniform_int_distribution<std::size_t> accept(1, criteria);
    for (;;) {
        std::size_t i = uniform_below(rng, total);
        if (macro && !only_first) i += first;
        const std::uint32_t id = i < first ? pool.at(0, i) : pool.at(1, i - first);
        if (accept(rng) <= size_of(id)) return id;
    }
}

}  // namespace

Question Elicitation::question_for_pair(ObjectId x, ObjectId y) {
    // Uniform unknown criterion of (x, y).
    const auto& kb = state_.kb();
    std::size_t r = uniform_below(rng_, state_.unknown_criteria(x, y));
    for (std::uint32_t c = 0; c < state_.criterion_count(); ++c) {
        if (kb.outcome_of(x, y, CriterionId{c})) continue;
        if (r-- == 0) return Question{x, y, CriterionId{c}};
    }
    throw Error(ErrorCode::Exhausted, "pair has no unknown criterion");
}

Question Elicitation::select_uniform_candidate(bool macro) {
    const auto n = static_cast<std::uint32_t>(state_.object_count());
    const std::uint32_t id = weighted_pick(state_.ordered_pairs(), macro, state_.criterion_count(), rng_,
                                           [&](std::uint32_t i) { return state_.unknown_criteria(ObjectId{i / n}, ObjectId{i % n}); });
    return question_for_pair(ObjectId{id / n}, ObjectId{id % n});
}

Question Elicitation::select_uniform_unknown(bool macro) {
    const auto n = static_cast<std::uint32_t>(state_.object_count());
    const std::uint32_t id = weighted_pick(state_.unordered_pairs(), macro, state_.criterion_count(), rng_,
                                           [&](std::uint32_t i) { return state_.unknown_criteria(ObjectId{i / n}, ObjectId{i % n}); });
    return question_for_pair(ObjectId{id / n}, ObjectId{id % n});
}

Question Elicitation::select_random_pair() {
    auto open_count = [&](ObjectId a, ObjectId b) -> std::uint32_t {
        return state_.pair_open(a, b) ? state_.unknown_criteria(a, b) : 0;
    };
    if (!selector_.pair || open_count(selector_.pair->x, selector_.pair->y) +
                                   open_count(selector_.pair->y, selector_.pair->x) ==
                               0) {
        const auto& pool = state_.ordered_pairs();
        const bool macro = transcript_.strategy.use_mo;
        const std::size_t first = pool.size(0);
        const bool only_first = macro && first > 0;
        const std::size_t total = only_first ? first : (macro ? pool.size(1) : first + pool.size(1));
        if (total == 0) throw Error(ErrorCode::Exhausted, "no candidate pair left");
        std::size_t i = uniform_below(rng_, total);
        if (macro && !only_first) i += first;
        const std::uint32_t id = i < first ? pool.at(0, i) : pool.at(1, i - first);
        const auto n = static_cast<std::uint32_t>(state_.object_count());
        selector_.pair = PairState{ObjectId{id / n}, ObjectId{id % n}, {}};
    }
    // Uniform over the pair's candidate questions in both orientations.
    const ObjectId a = selector_.pair->x;
    const ObjectId b = selector_.pair->y;
    const std::uint32_t ab = open_count(a, b);
    const std::uint32_t ba = open_count(b, a);
    return uniform_below(rng_, ab + ba) < ab ? question_for_pair(a, b) : question_for_pair(b, a);
}

std::optional<std::pair<ObjectId, ObjectId>> Elicitation::frq_pick_pair(int tier) const {
    // tier 0: y not dominated, 1: y dominated, -1: either.
    const std::size_t n = state_.object_count();
    const std::size_t words = (n + 63) / 64;
    const auto dominated = state_.dominated_mask();
    const BitMatrix::Word tail = n % 64 == 0 ? ~BitMatrix::Word{0} : (BitMatrix::Word{1} << (n % 64)) - 1;
    std::vector<BitMatrix::Word> m(words);
    for (std::size_t w = 0; w < words; ++w) {
        m[w] = tier < 0 ? ~BitMatrix::Word{0} : (tier == 0 ? ~dominated[w] : dominated[w]);
        if (w + 1 == words) m[w] &= tail;
    }
    auto open = [&](std::size_t s, std::uint32_t x) {
        const ObjectId o{x};
        if (tier >= 0) return state_.open_in_row(s, tier, o) > 0;
        return state_.open_in_row(s, 0, o) + state_.open_in_row(s, 1, o) > 0;
    };

    std::vector<BitMatrix::Word> ys(words);
    for (std::size_t s = 1; s <= state_.criterion_count(); ++s) {
        const BitMatrix& rows = state_.open_rows(s);
        // Fewest objects dominated by x.
        std::uint32_t best_dx = std::numeric_limits<std::uint32_t>::max();
        for (std::uint32_t x = 0; x < n; ++x)
            if (state_.dominance_count(ObjectId{x}) < best_dx && open(s, x)) best_dx = state_.dominance_count(ObjectId{x});
        if (best_dx == std::numeric_limits<std::uint32_t>::max()) continue;

        // Most objects dominated by y, over all y paired with those x.
        std::fill(ys.begin(), ys.end(), 0);
        for (std::uint32_t x = 0; x < n; ++x) {
            if (state_.dominance_count(ObjectId{x}) != best_dx || !open(s, x)) continue;
            const auto row = rows.row(x);
            for (std::size_t w = 0; w < words; ++w) ys[w] |= row[w] & m[w];
        }
        std::int64_t best_dy = -1;
        for_each_bit(std::span<const BitMatrix::Word>(ys), [&](std::size_t y) {
            best_dy = std::max<std::int64_t>(best_dy, state_.dominance_count(ObjectId{static_cast<std::uint32_t>(y)}));
        });
        for (std::size_t w = 0; w < words; ++w) {
            BitMatrix::Word keep = 0;
            for_each_bit(std::span<const BitMatrix::Word>(&ys[w], 1), [&](std::size_t b) {
                if (state_.dominance_count(ObjectId{static_cast<std::uint32_t>(w * 64 + b)}) == best_dy)
                    keep |= BitMatrix::Word{1} << b;
            });
            ys[w] = keep;
        }

        // Lowest (x, y) among the ties.
        for (std::uint32_t x = 0; x < n; ++x) {
            if (state_.dominance_count(ObjectId{x}) != best_dx || !open(s, x)) continue;
            const auto row = rows.row(x);
            for (std::size_t w = 0; w < words; ++w) {
                const BitMatrix::Word hit = row[w] & ys[w];
                if (hit)
                    return std::pair{ObjectId{x},
                                     ObjectId{static_cast<std::uint32_t>(w * 64 + std::countr_zero(hit))}};
            }
        }
    }
    return std::nullopt;
}

Question Elicitation::select_frq() {
    auto next_criterion = [&](ObjectId x, ObjectId y) {
        auto order = frq_order(state_.kb(), x, y, state_.unknown_criteria_list(x, y));
        selector_.pair = PairState{x, y, order};
        return Question{x, y, order.front()};
    };
    if (selector_.pair && state_.pair_open(selector_.pair->x, selector_.pair->y))
        return next_criterion(selector_.pair->x, selector_.pair->y);

    std::optional<std::pair<ObjectId, ObjectId>> pick;
    if (transcript_.strategy.use_mo) {
        pick = frq_pick_pair(0);
        if (!pick) pick = frq_pick_pair(1);
    } else {
        pick = frq_pick_pair(-1);
    }
    if (!pick) throw Error(ErrorCode::Exhausted, "no candidate pair left");
    const Question q = next_criterion(pick->first, pick->second);

    if (options_.verify && transcript_.strategy.use_mo) {
        const auto reference = frq_select(state_.kb(), candidate_sets(state_.kb(), state_.partition()));
        if (reference.first != q) ++transcript_.index_mismatches;
    }
    return q;
}

void Elicitation::check_invariants() {
    const auto& kb = state_.kb();
    const Partition& part = state_.partition();
    if (!(compute_partition(kb) == part)) ++transcript_.index_mismatches;
    const CandidateSets cands = candidate_sets(kb, part);
    if (cands.empty() != is_terminal(part)) ++transcript_.termination_mismatches;
    if (state_.index_options().ordered &&
        (cands.q1.size() != state_.candidate_count(0) || cands.q2.size() != state_.candidate_count(1)))
        ++transcript_.index_mismatches;
}

void Elicitation::push_entry(const Question& q, Outcome o, EntrySource src) {
    if (!options_.record_entries) return;
    const Partition& p = state_.partition();
    transcript_.entries.push_back(TranscriptEntry{transcript_.questions_asked, q, o, src,
                                                  static_cast<std::uint32_t>(p.confirmed_count()),
                                                  static_cast<std::uint32_t>(p.unknown_count()),
                                                  static_cast<std::uint32_t>(p.dominated_count())});
}

Outcome Elicitation::submit(const Question& q, Outcome proposed) {
    const std::size_t n = state_.object_count();
    if (q.x.value >= n || q.y.value >= n || q.c.value >= state_.criterion_count() || q.x == q.y)
        throw Error(ErrorCode::InvalidArgument, "question out of range");
    pending_.reset();
    if (const auto known = state_.kb().outcome_of(q)) {
        // Brute force asks derivable questions too; the answer adds nothing.
        ++transcript_.questions_asked;
        push_entry(q, *known, EntrySource::Asked);
        return *known;
    }
    const Outcome kept = resolve_contradiction(state_.kb(), q, proposed);
    derived_buffer_.clear();
    const auto upd = state_.record(q, kept, options_.record_derived && options_.record_entries ? &derived_buffer_ : nullptr);
    ++transcript_.questions_asked;
    transcript_.derived_facts += upd.derived;
    if (kept != proposed) ++transcript_.resolved;
    push_entry(q, kept, kept != proposed ? EntrySource::Resolved : EntrySource::Asked);
    for (const Fact& f : derived_buffer_) push_entry(Question{f.better, f.worse, f.c}, Outcome::XBetter, EntrySource::Derived);
    return kept;
}

void Elicitation::restore(const SelectorState& selector, const Rng& rng, std::optional<Question> pending) {
    selector_ = selector;
    rng_ = rng;
    pending_ = pending;
    // Decode the brute-force cursor into (x, y, c).
    const auto nc = state_.criterion_count();
    const auto n = state_.object_count();
    std::uint64_t pair = selector_.brute_force_cursor / nc;
    bf_c_ = static_cast<std::uint32_t>(selector_.brute_force_cursor % nc);
    bf_x_ = 0;
    while (bf_x_ + 1 < n && pair >= n - 1 - bf_x_) {
        pair -= n - 1 - bf_x_;
        ++bf_x_;
    }
    bf_y_ = static_cast<std::uint32_t>(bf_x_ + 1 + pair);
}

Transcript run_framework(const Universe& universe, StrategyKind strategy, AnswerSource& answers, std::uint64_t seed,
                         EngineOptions options) {
    Elicitation run(universe, strategy, seed, options);
    while (const auto q = run.next_question()) run.submit(*q, answers.answer(*q));
    return run.transcript();
}

bool assert_candidate_only(const Transcript& transcript) {
    const auto& u = transcript.universe;
    KnowledgeBase kb(u.object_count(), u.criterion_count());
    for (const auto& e : transcript.entries) {
        if (e.source == EntrySource::Derived) continue;
        if (!is_candidate(kb, compute_partition(kb), e.question)) return false;
        kb.record_outcome(e.question, e.outcome);
    }
    return true;
}

Partition replay_partition(const Transcript& transcript) {
    const auto& u = transcript.universe;
    KnowledgeBase kb(u.object_count(), u.criterion_count());
    for (const auto& e : transcript.entries) {
        if (e.source == EntrySource::Derived || kb.outcome_of(e.question)) continue;
        kb.record_outcome(e.question, e.outcome);
    }
    return compute_partition(kb);
}

}  // namespace pareto
