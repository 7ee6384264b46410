#include "pareto/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "pareto/bit_matrix.hpp"

namespace pareto {

GroundTruth::GroundTruth(std::size_t objects, std::size_t criteria)
    : n_(objects), nc_(criteria), rel_(criteria * objects * objects, 0) {
    if (criteria == 0) throw Error(ErrorCode::InvalidSpec, "at least one criterion is required");
}

void GroundTruth::set_better(std::size_t c, std::size_t x, std::size_t y) {
    rel_[(c * n_ + x) * n_ + y] = 1;
    rel_[(c * n_ + y) * n_ + x] = -1;
}

void GroundTruth::set_indifferent(std::size_t c, std::size_t x, std::size_t y) {
    rel_[(c * n_ + x) * n_ + y] = 0;
    rel_[(c * n_ + y) * n_ + x] = 0;
}

Outcome GroundTruth::outcome(const Question& q) const {
    switch (rel(q.c.value, q.x.value, q.y.value)) {
        case 1: return Outcome::XBetter;
        case -1: return Outcome::YBetter;
        default: return Outcome::Indifferent;
    }
}

void GroundTruth::validate() const {
    for (std::size_t c = 0; c < nc_; ++c) {
        for (std::size_t x = 0; x < n_; ++x) {
            if (rel(c, x, x) != 0) throw Error(ErrorCode::InvalidSpec, "relation is not irreflexive");
            for (std::size_t y = 0; y < n_; ++y) {
                if (rel(c, x, y) != -rel(c, y, x)) throw Error(ErrorCode::InvalidSpec, "relation is not asymmetric");
                if (rel(c, x, y) != 1) continue;
                for (std::size_t z = 0; z < n_; ++z)
                    if (rel(c, y, z) == 1 && rel(c, x, z) != 1)
                        throw Error(ErrorCode::InvalidSpec, "relation is not transitive");
            }
        }
    }
}

bool truth_dominates(const GroundTruth& truth, std::size_t y, std::size_t x) {
    bool better_somewhere = false;
    for (std::size_t c = 0; c < truth.criterion_count(); ++c) {
        const int r = truth.rel(c, y, x);
        if (r < 0) return false;
        if (r > 0) better_somewhere = true;
    }
    return better_somewhere;
}

std::vector<ObjectId> pareto_oracle(const GroundTruth& truth) {
    std::vector<ObjectId> out;
    const std::size_t n = truth.object_count();
    for (std::size_t x = 0; x < n; ++x) {
        bool dominated = false;
        for (std::size_t y = 0; y < n && !dominated; ++y)
            dominated = y != x && truth_dominates(truth, y, x);
        if (!dominated) out.push_back(ObjectId{static_cast<std::uint32_t>(x)});
    }
    return out;
}

std::vector<std::vector<double>> normal_scores(std::size_t objects, std::size_t criteria, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> s(objects, std::vector<double>(criteria));
    for (auto& row : s)
        for (auto& v : row) v = normal(rng);
    return s;
}

GroundTruth gen_perturbed_truth(const std::vector<std::vector<double>>& scores, Rng& rng) {
    const std::size_t n = scores.size();
    const std::size_t nc = n == 0 ? 0 : scores.front().size();
    GroundTruth truth(n, nc);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t c = 0; c < nc; ++c) {
        BitMatrix reach(n);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                const double gap = scores[x][c] - scores[y][c];
                if (!(gap > 0.0)) continue;
                if (unit(rng) < 1.0 - std::exp(-gap)) reach.set(x, y);
            }
        // Warshall over bit rows.  Edges only point down the score order, so
        // the closure stays acyclic.
        for (std::size_t k = 0; k < n; ++k) {
            const auto via = reach.row(k);
            for (std::size_t i = 0; i < n; ++i) {
                if (!reach.test(i, k)) continue;
                auto row = reach.row(i);
                for (std::size_t w = 0; w < row.size(); ++w) row[w] |= via[w];
            }
        }
        for (std::size_t x = 0; x < n; ++x)
            for_each_bit(reach.row(x), [&](std::size_t y) { truth.set_better(c, x, y); });
    }
    truth.scores = scores;
    return truth;
}

GroundTruth random_truth(std::size_t objects, std::size_t criteria, Rng& rng) {
    const auto scores = normal_scores(objects, criteria, rng);
    return gen_perturbed_truth(scores, rng);
}

TruthAnswerSource::TruthAnswerSource(const GroundTruth& truth, double noise, std::uint32_t k, double theta,
                                     std::uint64_t seed)
    : truth_(truth), noise_(noise), cfg_{k, theta}, rng_(seed) {
    if (!(noise >= 0.0 && noise < 0.5)) throw Error(ErrorCode::InvalidArgument, "noise must lie in [0, 0.5)");
    cfg_.validate();
}

Outcome TruthAnswerSource::answer(const Question& q) {
    const Outcome truth = truth_.outcome(q);
    if (noise_ == 0.0) return truth;
    std::bernoulli_distribution flip(noise_);
    std::uniform_int_distribution<int> other(1, 2);
    last_ = {};
    for (std::uint32_t i = 0; i < cfg_.k_min; ++i) {
        int choice = static_cast<int>(truth);
        if (flip(rng_)) choice = (choice + other(rng_)) % 3;
        switch (static_cast<Outcome>(choice)) {
            case Outcome::XBetter: ++last_.prefer_x; break;
            case Outcome::YBetter: ++last_.prefer_y; break;
            case Outcome::Indifferent: ++last_.indifferent; break;
        }
    }
    return aggregate(last_, cfg_);
}

std::uint64_t lower_bound(std::uint64_t objects, std::uint64_t criteria, std::uint64_t pareto) {
    if (criteria == 0 || pareto > objects) throw Error(ErrorCode::InvalidArgument, "need c >= 1 and k <= n");
    if (pareto == 0) return objects * criteria;
    // Two Pareto objects need two questions to split them, or |C| to find
    // them indifferent; with a single criterion that is one question.
    return (objects - pareto) * criteria + std::min<std::uint64_t>(criteria, 2) * (pareto - 1);
}

OutcomeMatrix outcome_matrix(const GroundTruth& truth, std::size_t c) {
    const std::size_t n = truth.object_count();
    OutcomeMatrix m(n, std::vector<int>(n, 0));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) m[x][y] = truth.rel(c, x, y);
    return m;
}

namespace {

// Simple strict paths from `from` to `to` whose inner vertices are unused
// and not below floor.
std::uint64_t count_paths(const OutcomeMatrix& rel, std::size_t from, std::size_t to, std::vector<bool>& used,
                          std::size_t floor) {
    std::uint64_t total = rel[from][to] == 1 ? 1 : 0;
    for (std::size_t next = floor; next < rel.size(); ++next) {
        if (next == to || used[next] || rel[from][next] != 1) continue;
        used[next] = true;
        total += count_paths(rel, next, to, used, floor);
        used[next] = false;
    }
    return total;
}

}  // namespace

std::uint64_t count_contradiction_cycles(const OutcomeMatrix& rel) {
    const std::size_t n = rel.size();
    if (n > 16) throw Error(ErrorCode::TooLarge, "cycle counting is limited to 16 objects");
    std::uint64_t total = 0;
    std::vector<bool> used(n, false);
    // Purely strict cycles, each counted once from its smallest vertex.
    for (std::size_t s = 0; s < n; ++s) {
        used[s] = true;
        for (std::size_t t = s + 1; t < n; ++t) {
            if (rel[s][t] != 1) continue;
            used[t] = true;
            total += count_paths(rel, t, s, used, s + 1);
            used[t] = false;
        }
        used[s] = false;
    }
    // Cycles closed by one indifference edge {u, v}: a strict path u -> v.
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v || rel[u][v] != 0) continue;
            used[u] = true;
            total += count_paths(rel, u, v, used, 0);
            used[u] = false;
        }
    return total;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix(h ^ splitmix(v)); }

}  // namespace

std::uint64_t truth_seed(std::uint64_t base, const ExperimentCell& cell, std::uint64_t replicate) {
    return mix(mix(mix(base, cell.objects), cell.criteria), replicate);
}

std::uint64_t run_seed(std::uint64_t truth_seed, const StrategyKind& strategy) {
    std::uint64_t h = truth_seed;
    for (char ch : to_string(strategy)) h = mix(h, static_cast<unsigned char>(ch));
    return h;
}

namespace {

struct Job {
    ExperimentCell cell;
    std::uint64_t replicate;
};

struct JobResult {
    std::vector<ExperimentRow> rows;
    std::uint64_t oracle_mismatches = 0;
    std::uint64_t bound_violations = 0;
    std::vector<std::string> failures;
};

JobResult run_job(const ExperimentConfig& cfg, const Job& job) {
    JobResult out;
    const std::uint64_t tseed = truth_seed(cfg.base_seed, job.cell, job.replicate);
    GroundTruth generated;
    if (!cfg.fixture) {
        Rng rng(tseed);
        generated = random_truth(job.cell.objects, job.cell.criteria, rng);
    }
    const GroundTruth& truth = cfg.fixture ? *cfg.fixture : generated;
    const auto expected = pareto_oracle(truth);
    const auto bound = lower_bound(truth.object_count(), truth.criterion_count(), expected.size());
    const Universe universe = Universe::numbered(truth.object_count(), truth.criterion_count());

    for (const auto& strategy : cfg.strategies) {
        const std::uint64_t rseed = run_seed(tseed, strategy);
        TruthAnswerSource answers(truth, cfg.noise, cfg.k, cfg.theta, mix(rseed, 0xA5));
        EngineOptions opts;
        opts.verify = cfg.verify;
        opts.record_entries = false;
        const auto start = std::chrono::steady_clock::now();
        const Transcript t = run_framework(universe, strategy, answers, rseed, opts);
        const auto stop = std::chrono::steady_clock::now();

        ExperimentRow row;
        row.n = truth.object_count();
        row.criteria = truth.criterion_count();
        row.strategy = to_string(strategy);
        row.seed = job.replicate;
        row.questions_asked = t.questions_asked;
        row.derived_facts = t.derived_facts;
        row.pareto_count = t.final_partition.confirmed_count();
        row.lower_bound = bound;
        row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        row.termination_mismatches = t.termination_mismatches;
        row.index_mismatches = t.index_mismatches;

        const std::string where = row.strategy + " n=" + std::to_string(row.n) + " c=" +
                                  std::to_string(row.criteria) + " replicate=" + std::to_string(row.seed);
        if (cfg.noise == 0.0) {
            if (t.pareto() != expected) {
                ++out.oracle_mismatches;
                out.failures.push_back("oracle mismatch: " + where);
                continue;
            }
            if (t.questions_asked < bound) {
                ++out.bound_violations;
                out.failures.push_back("below lower bound: " + where);
            }
        }
        if (t.termination_mismatches) out.failures.push_back("candidate set and O? disagree: " + where);
        if (t.index_mismatches) out.failures.push_back("incremental state mismatch: " + where);
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::function<void(const ExperimentRow&)>& on_row) {
    if (cfg.strategies.empty()) throw Error(ErrorCode::InvalidArgument, "no strategy given");
    for (const auto& s : cfg.strategies) s.validate();
    std::vector<Job> jobs;
    for (const auto& cell : cfg.cells) {
        if (!cfg.fixture && (cell.objects == 0 || cell.criteria == 0))
            throw Error(ErrorCode::InvalidArgument, "cells need at least one object and one criterion");
        for (std::uint64_t r = 0; r < cfg.replicates; ++r) jobs.push_back({cell, r});
    }

    ExperimentSummary summary;
    std::vector<std::optional<JobResult>> done(jobs.size());
    std::size_t emitted = 0;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            std::optional<JobResult> result;
            try {
                result = run_job(cfg, jobs[i]);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
                next = jobs.size();
                return;
            }
            std::lock_guard lock(mu);
            done[i] = std::move(result);
            while (emitted < done.size() && done[emitted]) {
                auto& r = *done[emitted];
                for (const auto& row : r.rows) {
                    if (on_row) on_row(row);
                    summary.termination_mismatches += row.termination_mismatches;
                    summary.index_mismatches += row.index_mismatches;
                    summary.rows.push_back(row);
                }
                summary.oracle_mismatches += r.oracle_mismatches;
                summary.bound_violations += r.bound_violations;
                for (auto& f : r.failures) summary.failures.push_back(std::move(f));
                r = {};
                ++emitted;
            }
        }
    };

    std::size_t threads = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
    threads = std::min(threads, std::max<std::size_t>(jobs.size(), 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return summary;
}

std::string csv_header() {
    return "n,criteria,strategy,seed,questions_asked,derived_facts,pareto_count,lower_bound,runtime_ms";
}

std::string csv_line(const ExperimentRow& row, bool with_timing) {
    std::string out = std::to_string(row.n) + ',' + std::to_string(row.criteria) + ',' + row.strategy + ',' +
                      std::to_string(row.seed) + ',' + std::to_string(row.questions_asked) + ',' +
                      std::to_string(row.derived_facts) + ',' + std::to_string(row.pareto_count) + ',' +
                      std::to_string(row.lower_bound) + ',';
    if (with_timing) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", row.runtime_ms);
        out += buf;
    }
    return out;
}

}  // namespace pareto
