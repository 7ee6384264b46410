#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pareto/aggregation.hpp"
#include "pareto/engine.hpp"
#include "pareto/selection.hpp"
#include "pareto/types.hpp"

namespace pareto {

/// Complete preference relations, one per criterion.  rel(c, x, y) is +1 when
/// x > y, -1 when y > x and 0 when indifferent.  Kept as plain dense arrays
/// so the oracle below shares no code with the elicitation engine.
class GroundTruth {
public:
    GroundTruth() = default;
    GroundTruth(std::size_t objects, std::size_t criteria);

    std::size_t object_count() const { return n_; }
    std::size_t criterion_count() const { return nc_; }

    int rel(std::size_t c, std::size_t x, std::size_t y) const { return rel_[(c * n_ + x) * n_ + y]; }
    /// Sets x > y on c (and the mirrored entry).
    void set_better(std::size_t c, std::size_t x, std::size_t y);
    void set_indifferent(std::size_t c, std::size_t x, std::size_t y);

    Outcome outcome(const Question& q) const;

    /// Throws InvalidSpec unless every criterion is an irreflexive,
    /// asymmetric, transitive relation.
    void validate() const;

    /// Latent scores [object][criterion] when generated from scores.
    std::vector<std::vector<double>> scores;

private:
    std::size_t n_ = 0;
    std::size_t nc_ = 0;
    std::vector<std::int8_t> rel_;
};

/// Objects no other object dominates, by direct pairwise scan.
std::vector<ObjectId> pareto_oracle(const GroundTruth& truth);

/// y dominates x under the truth.
bool truth_dominates(const GroundTruth& truth, std::size_t y, std::size_t x);

/// Standard normal scores, scores[object][criterion].
std::vector<std::vector<double>> normal_scores(std::size_t objects, std::size_t criteria, Rng& rng);

/// Samples x > y with probability 1 - exp(-(x.c - y.c)) for every pair with
/// x.c > y.c, indifferent otherwise, then closes the strict edges
/// transitively (a sampled indifference that conflicts becomes strict).
GroundTruth gen_perturbed_truth(const std::vector<std::vector<double>>& scores, Rng& rng);

/// Random consistent instance with normal scores.
GroundTruth random_truth(std::size_t objects, std::size_t criteria, Rng& rng);

/// Answers from a ground truth.  With noise > 0 each question gets k votes,
/// each replaced by a uniformly chosen other answer with probability noise,
/// and the tally is aggregated with theta.
class TruthAnswerSource : public AnswerSource {
public:
    TruthAnswerSource(const GroundTruth& truth, double noise = 0.0, std::uint32_t k = 10, double theta = 0.6,
                      std::uint64_t seed = 0);
    Outcome answer(const Question& q) override;

    const VoteTally& last_tally() const { return last_; }

private:
    const GroundTruth& truth_;
    double noise_;
    AggregationConfig cfg_;
    Rng rng_;
    VoteTally last_;
};

/// Questions any strategy needs when k objects are Pareto-optimal;
/// n * c when k == 0.
std::uint64_t lower_bound(std::uint64_t objects, std::uint64_t criteria, std::uint64_t pareto);

/// One criterion's complete outcomes: rel[x][y] as in GroundTruth::rel.
using OutcomeMatrix = std::vector<std::vector<int>>;

/// Elementary cycles with at most one indifference edge whose strict edges
/// all point the same way around.  Exponential; throws TooLarge above 16
/// objects.
std::uint64_t count_contradiction_cycles(const OutcomeMatrix& rel);

/// Outcome matrix of criterion c of a truth.
OutcomeMatrix outcome_matrix(const GroundTruth& truth, std::size_t c);

// ---------------------------------------------------------------------------

struct ExperimentCell {
    std::size_t objects = 0;
    std::size_t criteria = 0;
};

struct ExperimentConfig {
    std::vector<ExperimentCell> cells;
    std::vector<StrategyKind> strategies;
    std::size_t replicates = 30;
    std::uint64_t base_seed = 1;
    double noise = 0.0;
    std::uint32_t k = 10;
    double theta = 0.6;
    /// Cross-check the incremental state at every iteration (slow).
    bool verify = false;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t jobs = 1;
    /// Fixed instance instead of generated ones (replicates still vary seeds).
    const GroundTruth* fixture = nullptr;
};

struct ExperimentRow {
    std::size_t n = 0;
    std::size_t criteria = 0;
    std::string strategy;
    std::uint64_t seed = 0;  // replicate index
    std::uint64_t questions_asked = 0;
    std::uint64_t derived_facts = 0;
    std::uint64_t pareto_count = 0;
    std::uint64_t lower_bound = 0;
    double runtime_ms = 0.0;
    std::uint64_t termination_mismatches = 0;
    std::uint64_t index_mismatches = 0;
};

struct ExperimentSummary {
    std::vector<ExperimentRow> rows;
    /// Runs whose confirmed set differed from the oracle; no row is kept.
    std::uint64_t oracle_mismatches = 0;
    /// Noiseless runs that asked fewer questions than the lower bound.
    std::uint64_t bound_violations = 0;
    std::uint64_t termination_mismatches = 0;
    std::uint64_t index_mismatches = 0;
    std::vector<std::string> failures;
};

/// Deterministic seed for a truth instance and for one run on it.
std::uint64_t truth_seed(std::uint64_t base, const ExperimentCell& cell, std::uint64_t replicate);
std::uint64_t run_seed(std::uint64_t truth_seed, const StrategyKind& strategy);

/// Runs every cell x replicate x strategy.  on_row is called in grid order
/// (cell, replicate, strategy) as soon as a row and all rows before it are
/// done, so partial output stays usable.
ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 const std::function<void(const ExperimentRow&)>& on_row = {});

std::string csv_header();
/// runtime_ms is left empty unless with_timing, which keeps output
/// byte-stable for fixed seeds.
std::string csv_line(const ExperimentRow& row, bool with_timing);

}  // namespace pareto
