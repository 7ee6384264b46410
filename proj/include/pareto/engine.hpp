#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pareto/bit_matrix.hpp"
#include "pareto/order.hpp"
#include "pareto/selection.hpp"
#include "pareto/types.hpp"

namespace pareto {

/// Ids in [0, universe) spread over two tiers, with O(1) insert, erase and
/// uniform access by position.
class TieredPool {
public:
    TieredPool() = default;
    explicit TieredPool(std::size_t universe) : pos_(universe, 0) {}

    void insert(int tier, std::uint32_t id) {
        pos_[id] = static_cast<std::uint32_t>(items_[tier].size());
        items_[tier].push_back(id);
    }
    void erase(int tier, std::uint32_t id) {
        auto& v = items_[tier];
        const std::uint32_t p = pos_[id];
        v[p] = v.back();
        pos_[v[p]] = p;
        v.pop_back();
    }
    std::size_t size(int tier) const { return items_[tier].size(); }
    std::uint32_t at(int tier, std::size_t i) const { return items_[tier][i]; }

private:
    std::array<std::vector<std::uint32_t>, 2> items_;
    std::vector<std::uint32_t> pos_;
};

/// Which incremental candidate indexes an ElicitationState maintains.
struct IndexOptions {
    bool ordered = true;     // candidate pairs (x, y), for +CQ strategies
    bool unordered = false;  // pairs with unknown outcomes, for -CQ strategies
};

/// Knowledge base plus everything derived from it that question selection
/// needs, updated incrementally per recorded outcome: the three-way
/// partition, per-object dominance counts, and candidate-pair indexes.
class ElicitationState {
public:
    ElicitationState(std::size_t objects, std::size_t criteria, IndexOptions index = {});

    struct Update {
        std::size_t derived = 0;
        std::vector<ObjectId> newly_dominated;
        std::vector<ObjectId> newly_confirmed;
    };

    /// Records a fresh outcome (see KnowledgeBase::record_outcome).  When
    /// derived_out is given, the facts derived by transitivity are appended.
    Update record(const Question& q, Outcome o, std::vector<Fact>* derived_out = nullptr);

    const KnowledgeBase& kb() const { return kb_; }
    const Partition& partition() const { return part_; }
    std::size_t object_count() const { return n_; }
    std::size_t criterion_count() const { return nc_; }
    const IndexOptions& index_options() const { return index_; }

    /// Number of criteria on which x and y are still unknown.
    std::uint32_t unknown_criteria(ObjectId x, ObjectId y) const { return unknown_[x.value * n_ + y.value]; }
    std::vector<CriterionId> unknown_criteria_list(ObjectId x, ObjectId y) const;

    /// d(x): how many objects x dominates so far.
    std::uint32_t dominance_count(ObjectId x) const { return d_[x.value]; }

    /// (x, y) has candidate questions: x undetermined, y may dominate x, and
    /// some criterion is unknown.  Requires the ordered index.
    bool pair_open(ObjectId x, ObjectId y) const { return pair_code_[x.value * n_ + y.value] != 0; }
    /// 0 when closed, otherwise 1 (y not dominated) or 2 (y dominated).
    int pair_tier(ObjectId x, ObjectId y) const { return pair_code_[x.value * n_ + y.value] >> 8; }

    /// Candidate questions per macro tier (index 0: q1, 1: q2).
    std::uint64_t candidate_count(int tier) const { return question_count_[tier]; }
    std::uint64_t candidate_count() const { return question_count_[0] + question_count_[1]; }

    const TieredPool& ordered_pairs() const { return ordered_; }
    const TieredPool& unordered_pairs() const { return unordered_; }
    /// Unknown questions per unordered tier (0: no endpoint dominated).
    std::uint64_t unknown_question_count(int tier) const { return unknown_count_[tier]; }

    /// Rows of open ordered pairs with exactly s unknown criteria.
    const BitMatrix& open_rows(std::size_t s) const { return open_rows_[s]; }
    /// Open pairs (x, .) with s unknown criteria in the given tier (0 or 1).
    std::uint32_t open_in_row(std::size_t s, int tier, ObjectId x) const {
        return row_open_[(s * 2 + tier) * n_ + x.value];
    }
    std::span<const BitMatrix::Word> dominated_mask() const { return dominated_mask_; }

private:
    void recheck_pair(std::uint32_t a, std::uint32_t b, Update& upd);
    void set_status(std::uint32_t z, Status s);
    void refresh_ordered(std::uint32_t x, std::uint32_t y);
    void refresh_unordered(std::uint32_t a, std::uint32_t b);
    void refresh_object(std::uint32_t z);

    std::size_t n_;
    std::size_t nc_;
    IndexOptions index_;
    KnowledgeBase kb_;
    Partition part_;

    std::vector<std::uint8_t> unknown_;  // symmetric, per ordered pair
    BitMatrix beats_any_;                // x > y on some criterion
    BitMatrix dominance_;                // x dominates y
    BitMatrix settled_;                  // y can never dominate x
    std::vector<std::uint32_t> settled_count_;
    std::vector<std::uint32_t> d_;

    std::vector<std::uint16_t> pair_code_;  // tier << 8 | unknown count
    TieredPool ordered_;
    std::vector<BitMatrix> open_rows_;  // indexed by unknown count
    std::vector<std::uint32_t> row_open_;
    std::array<std::uint64_t, 2> question_count_{0, 0};
    std::vector<BitMatrix::Word> dominated_mask_;

    std::vector<std::uint16_t> upair_code_;
    TieredPool unordered_;
    std::array<std::uint64_t, 2> unknown_count_{0, 0};

    std::vector<std::pair<std::uint32_t, std::uint32_t>> touched_;
};

/// Synchronous answer provider: returns a finalized outcome for any question.
class AnswerSource {
public:
    virtual ~AnswerSource() = default;
    virtual Outcome answer(const Question& q) = 0;
};

enum class EntrySource : std::uint8_t { Asked, Derived, Resolved };
std::string_view to_string(EntrySource s);

struct TranscriptEntry {
    std::uint64_t iteration = 0;
    Question question;
    Outcome outcome = Outcome::Indifferent;
    EntrySource source = EntrySource::Asked;
    std::uint32_t confirmed = 0;
    std::uint32_t unknown = 0;
    std::uint32_t dominated = 0;
};

struct Transcript {
    Universe universe;
    StrategyKind strategy;
    std::uint64_t seed = 0;
    std::vector<TranscriptEntry> entries;
    Partition final_partition;
    std::uint64_t questions_asked = 0;
    std::uint64_t derived_facts = 0;
    std::uint64_t resolved = 0;
    /// Iterations where "no candidate question" and "O? empty" disagreed.
    std::uint64_t termination_mismatches = 0;
    /// Verify mode: incremental state disagreed with full recomputation.
    std::uint64_t index_mismatches = 0;

    std::vector<ObjectId> pareto() const { return final_partition.confirmed(); }
};

struct EngineOptions {
    /// Recompute partition and candidate sets from scratch at every
    /// iteration and compare with the incremental state.
    bool verify = false;
    /// Keep derived facts as transcript entries (counted either way).
    bool record_derived = true;
    /// Keep transcript entries at all; large simulations only need counters.
    bool record_entries = true;
};

/// What a selector remembers between questions; persisted with sessions.
struct SelectorState {
    std::optional<PairState> pair;
    std::uint64_t brute_force_cursor = 0;
};

/// One elicitation run: incremental state, the micro-ordering selector and
/// the transcript.  Drive it with next_question() / submit().
class Elicitation {
public:
    Elicitation(Universe universe, StrategyKind strategy, std::uint64_t seed, EngineOptions options = {});

    /// Selects the next question, or nullopt once the run is over.  Repeated
    /// calls without submit() return the same question.
    std::optional<Question> next_question();

    /// Finalizes an answer to q: contradiction resolution, recording and
    /// repartitioning.  Returns the outcome that was kept.
    Outcome submit(const Question& q, Outcome proposed);

    bool finished() const;
    const ElicitationState& state() const { return state_; }
    const Transcript& transcript() const {
        transcript_.final_partition = state_.partition();
        return transcript_;
    }
    const Universe& universe() const { return transcript_.universe; }
    const StrategyKind& strategy() const { return transcript_.strategy; }

    const SelectorState& selector_state() const { return selector_; }
    const std::optional<Question>& pending() const { return pending_; }
    Rng& rng() { return rng_; }
    const Rng& rng() const { return rng_; }

    /// Restores selection state after replaying recorded outcomes.
    void restore(const SelectorState& selector, const Rng& rng, std::optional<Question> pending);

private:
    Question select();
    Question select_brute_force();
    Question select_uniform_candidate(bool macro);
    Question select_uniform_unknown(bool macro);
    Question select_random_pair();
    Question select_frq();
    std::optional<std::pair<ObjectId, ObjectId>> frq_pick_pair(int tier) const;
    Question question_for_pair(ObjectId x, ObjectId y);
    void check_invariants();
    void push_entry(const Question& q, Outcome o, EntrySource src);

    ElicitationState state_;
    mutable Transcript transcript_;
    EngineOptions options_;
    Rng rng_;
    SelectorState selector_;
    std::optional<Question> pending_;
    std::vector<Fact> derived_buffer_;
    // Brute-force position, decoded from selector_.brute_force_cursor.
    std::uint32_t bf_x_ = 0;
    std::uint32_t bf_y_ = 1;
    std::uint32_t bf_c_ = 0;
};

/// Runs the loop select -> ask -> resolve -> record -> repartition until O?
/// is empty (or, for brute force, every question was asked).
Transcript run_framework(const Universe& universe, StrategyKind strategy, AnswerSource& answers,
                         std::uint64_t seed, EngineOptions options = {});

/// Replays a transcript and checks that every asked question was a candidate
/// at the moment it was asked.
bool assert_candidate_only(const Transcript& transcript);

/// Partition obtained by recording the transcript's asked outcomes anew.
Partition replay_partition(const Transcript& transcript);

}  // namespace pareto
