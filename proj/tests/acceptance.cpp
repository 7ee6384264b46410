// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit when any
// check fails.  Run with --quick to skip the n=1000 experiment.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <map>

#include "pareto/report.hpp"
#include "pareto/service.hpp"
#include "support.hpp"

using namespace pareto;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void line(bool ok, const char* id, const std::string& what, const std::string& measured) {
    if (!ok) ++failures;
    std::printf("%s  %-3s %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), measured.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Totals over every noiseless run in this binary.
std::uint64_t termination_mismatches = 0;
std::uint64_t bound_violations = 0;
std::uint64_t noiseless_runs = 0;

void account(const Transcript& t, const GroundTruth& truth) {
    ++noiseless_runs;
    termination_mismatches += t.termination_mismatches;
    if (t.questions_asked < lower_bound(truth.object_count(), truth.criterion_count(), pareto_oracle(truth).size()))
        ++bound_violations;
}

void story_votes() {
    const auto t0 = Clock::now();
    const Dataset d = *builtin_fixture("movie-story");
    const auto story = *d.universe.find_criterion("story");
    int mismatches = 0;
    for (const auto& row : testing::story_outcomes()) {
        const Question q{*d.universe.find_object(row.x), *d.universe.find_object(row.y), story};
        if (aggregate(d.votes.at(q), {5, 0.6}) != row.outcome) ++mismatches;
    }
    const double s = seconds_since(t0);
    line(mismatches == 0 && d.votes.size() == 15 && s < 1.0, "1", "story vote table, k=5 theta=0.6",
         std::to_string(d.votes.size()) + " rows, " + std::to_string(mismatches) + " mismatches, " + fmt("%.4f s", s));
}

void bounds() {
    const bool ok = lower_bound(10, 3, 4) == 24 && lower_bound(10, 3, 3) == 25 && lower_bound(6, 3, 1) == 15 &&
                    lower_bound(3, 3, 0) == 9;
    line(ok, "2", "lower bounds (10,3,4) (10,3,3) (6,3,1) (3,3,0)",
         std::to_string(lower_bound(10, 3, 4)) + " " + std::to_string(lower_bound(10, 3, 3)) + " " +
             std::to_string(lower_bound(6, 3, 1)) + " " + std::to_string(lower_bound(3, 3, 0)));
}

void brute_force() {
    Rng rng(2024);
    const GroundTruth truth = random_truth(10, 3, rng);
    TruthAnswerSource a(truth);
    const Transcript t10 = run_framework(Universe::numbered(10, 3), StrategyKind::brute_force(), a, 1);
    account(t10, truth);
    const Dataset movie = *builtin_fixture("movie-full");
    TruthAnswerSource b(*movie.truth);
    const Transcript tm = run_framework(movie.universe, StrategyKind::brute_force(), b, 1);
    account(tm, *movie.truth);
    line(t10.questions_asked == 135 && tm.questions_asked == 45, "3", "brute force n=10 |C|=3, movie fixture",
         std::to_string(t10.questions_asked) + ", " + std::to_string(tm.questions_asked));
}

void oracle_sweep() {
    const auto t0 = Clock::now();
    EngineOptions opt;
    opt.verify = true;
    opt.record_entries = false;
    int matched = 0;
    std::uint64_t index_mismatches = 0;
    const auto strategies = testing::all_strategies();
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const GroundTruth truth = testing::small_instance(seed * 7919);
        const auto oracle = pareto_oracle(truth);
        bool all = true;
        for (const auto& s : strategies) {
            TruthAnswerSource answers(truth);
            const Transcript t = run_framework(Universe::numbered(truth.object_count(), truth.criterion_count()), s,
                                               answers, seed, opt);
            account(t, truth);
            index_mismatches += t.index_mismatches;
            if (t.pareto() != oracle) all = false;
        }
        if (all) ++matched;
    }
    const double s = seconds_since(t0);
    line(matched == 200 && index_mismatches == 0 && s < 60.0, "4",
         "oracle equivalence, 200 instances x " + std::to_string(strategies.size()) + " strategies",
         std::to_string(matched) + "/200 match, " + fmt("%.1f s", s));
}

void cyclic_fixture() {
    const Dataset fig3 = *builtin_fixture("fig3");
    bool ok = true;
    std::map<std::uint64_t, int> asked;
    for (const auto& s : testing::all_strategies()) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            TruthAnswerSource answers(*fig3.truth);
            const Transcript t = run_framework(fig3.universe, s, answers, seed);
            account(t, *fig3.truth);
            ++asked[t.questions_asked];
            ok = ok && t.questions_asked == 9 && t.pareto().empty();
        }
    }
    SessionSpec spec;
    spec.objects = fig3.universe.objects();
    spec.criteria = fig3.universe.criteria();
    spec.cfg = {1, 0.6};
    Session session("fig3", spec);
    while (auto q = session.current()) {
        const Outcome o = fig3.truth->outcome(*q);
        session.vote(session.question_id(),
                     o == Outcome::XBetter ? Vote::PreferX : o == Outcome::YBetter ? Vote::PreferY : Vote::Indifferent, "");
    }
    const std::string dot = dominance_dot(session);
    const bool cycle = dot.find("\"x\" -> \"y\"") != std::string::npos && dot.find("\"y\" -> \"z\"") != std::string::npos &&
                       dot.find("\"z\" -> \"x\"") != std::string::npos;
    std::string counts;
    for (const auto& [k, v] : asked) counts += std::to_string(k) + " asked x" + std::to_string(v) + " ";
    line(ok && cycle, "6", "cyclic fixture: 9 questions, no Pareto object, 3-cycle in DOT",
         counts + (cycle ? "cycle present" : "cycle missing"));
}

void closure() {
    std::size_t bad = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) bad += testing::closure_sequence_mismatches(seed * 31, 32, 400) ? 1 : 0;
    line(bad == 0, "9", "incremental closure vs reachability, 100 sequences at n=32", std::to_string(bad) + " sequences differ");
}

void rule2() {
    auto q = [](std::uint32_t x, std::uint32_t y) { return Question{ObjectId{x}, ObjectId{y}, CriterionId{0}}; };
    int ok_patterns = 0;
    {
        KnowledgeBase kb(3, 1);  // x ~ y, y > z, proposed z > x
        kb.record_outcome(q(0, 1), Outcome::Indifferent);
        kb.record_outcome(q(1, 2), Outcome::XBetter);
        ok_patterns += resolve_contradiction(kb, q(2, 0), Outcome::XBetter) == Outcome::Indifferent;
        ok_patterns += resolve_contradiction(kb, q(0, 2), Outcome::YBetter) == Outcome::Indifferent;
    }
    {
        KnowledgeBase kb(3, 1);  // x ~ y, z > y, proposed x > z
        kb.record_outcome(q(0, 1), Outcome::Indifferent);
        kb.record_outcome(q(2, 1), Outcome::XBetter);
        ok_patterns += resolve_contradiction(kb, q(0, 2), Outcome::XBetter) == Outcome::Indifferent;
    }
    int unresolvable = 0, corrupted = 0, resolved = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed);
        const GroundTruth truth = random_truth(30, 3, rng);
        for (const auto& s : {StrategyKind::frq(), StrategyKind::random_p(), StrategyKind::random_q()}) {
            TruthAnswerSource answers(truth, 0.1, 10, 0.6, seed);
            Elicitation e(Universe::numbered(30, 3), s, seed);
            try {
                while (auto next = e.next_question()) e.submit(*next, answers.answer(*next));
            } catch (const Error& err) {
                if (err.code() == ErrorCode::Unresolvable) ++unresolvable;
                else throw;
            }
            for (std::uint32_t c = 0; c < 3; ++c)
                if (!testing::closure_violation(e.state().kb().closure(CriterionId{c})).empty()) ++corrupted;
            resolved += static_cast<int>(e.transcript().resolved);
        }
    }
    line(ok_patterns == 3 && unresolvable == 0 && corrupted == 0, "10",
         "contradiction patterns resolve to indifference; noisy fuzz over 100 seeds",
         std::to_string(ok_patterns) + "/3 patterns, " + std::to_string(unresolvable) + " unresolvable, " +
             std::to_string(corrupted) + " corrupted closures, " + std::to_string(resolved) + " outcomes replaced");
}

void large_experiment() {
    const auto t0 = Clock::now();
    ExperimentConfig cfg;
    cfg.cells = {{1000, 4}};
    cfg.strategies = parse_strategy_list("frq,randomp,randomq,+cq-mo,-cq+mo,bruteforce");
    cfg.replicates = 30;
    cfg.jobs = 0;
    const ExperimentSummary summary = run_experiment(cfg);
    const double s = seconds_since(t0);
    termination_mismatches += summary.termination_mismatches;
    bound_violations += summary.bound_violations;
    noiseless_runs += summary.rows.size() + summary.oracle_mismatches;

    std::map<std::string, double> mean;
    for (const auto& x : summarize(summary.rows)) mean[x.strategy] = x.mean_asked;
    double bound = 0;
    std::size_t frq_runs = 0;
    for (const auto& r : summary.rows)
        if (r.strategy == "frq") bound += static_cast<double>(r.lower_bound), ++frq_runs;
    bound /= static_cast<double>(frq_runs ? frq_runs : 1);

    const bool ordered = summary.oracle_mismatches == 0 && mean["frq"] < mean["randomp"] &&
                         mean["randomp"] < mean["randomq"] && mean["randomq"] < mean["+cq-mo"] &&
                         mean["+cq-mo"] < mean["-cq+mo"] && mean["-cq+mo"] <= mean["bruteforce"];
    line(ordered, "7a", "n=1000 |C|=4 30 seeds: FRQ < RandomP < RandomQ < +CQ-MO < -CQ+MO <= BruteForce",
         fmt("%.0f", mean["frq"]) + " < " + fmt("%.0f", mean["randomp"]) + " < " + fmt("%.0f", mean["randomq"]) + " < " +
             fmt("%.0f", mean["+cq-mo"]) + " < " + fmt("%.0f", mean["-cq+mo"]) + " <= " +
             fmt("%.0f", mean["bruteforce"]) + ", " + std::to_string(summary.oracle_mismatches) + " oracle mismatches");
    const double ratio = mean["randomq"] / mean["bruteforce"];
    line(ratio <= 0.05, "7b", "RandomQ / BruteForce <= 0.05", fmt("%.4f", ratio));
    const double frq_ratio = mean["frq"] / bound;
    line(frq_ratio <= 2.0, "7c", "FRQ <= 2x lower bound",
         fmt("FRQ %.0f", mean["frq"]) + fmt(", bound %.0f", bound) + fmt(", ratio %.2f", frq_ratio));
    line(s < 300.0, "7d", "n=1000 experiment runtime < 5 min", fmt("%.1f s", s));
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    story_votes();
    bounds();
    brute_force();
    oracle_sweep();
    cyclic_fixture();
    if (!quick) large_experiment();
    line(termination_mismatches == 0, "5", "no candidate question exactly when O? is empty, every iteration of every run",
         std::to_string(termination_mismatches) + " mismatches");
    line(bound_violations == 0, "8", "asked >= lower bound in every noiseless run",
         std::to_string(bound_violations) + " violations over " + std::to_string(noiseless_runs) + " runs");
    closure();
    rule2();
    std::printf("%d check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
