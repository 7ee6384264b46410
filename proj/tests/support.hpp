// Helpers shared by the unit tests and the acceptance binary.
#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pareto/dataset.hpp"
#include "pareto/engine.hpp"
#include "pareto/order.hpp"
#include "pareto/simulation.hpp"

namespace pareto::testing {

/// Empty when the closure is irreflexive, asymmetric, transitive, disjoint
/// from its indifferent pairs, and its counters agree with the bits.
inline std::string closure_violation(const PreferenceClosure& p) {
    const std::size_t n = p.object_count();
    std::size_t strict = 0, indiff = 0;
    for (std::size_t u = 0; u < n; ++u) {
        if (p.better(u, u)) return "reflexive at " + std::to_string(u);
        std::size_t beats = 0, beaten = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (p.better(u, v)) {
                ++strict, ++beats;
                if (p.better(v, u)) return "asymmetry broken";
                if (p.indifferent(u, v)) return "strict pair also indifferent";
                for (std::size_t w = 0; w < n; ++w)
                    if (p.better(v, w) && !p.better(u, w)) return "not transitive";
            }
            if (p.better(v, u)) ++beaten;
            if (p.indifferent(u, v)) {
                if (!p.indifferent(v, u)) return "indifference not symmetric";
                if (u < v) ++indiff;
            }
        }
        if (beats != p.beats_count(u) || beaten != p.beaten_count(u)) return "stale counters";
    }
    if (strict != p.strict_pair_count() || indiff != p.indifferent_pair_count()) return "stale pair counts";
    return {};
}

/// Inserts a random sequence of strict and indifferent facts into a fresh
/// closure and compares it against reachability over the inserted strict
/// edges after every step.  Returns the number of steps that disagreed.
inline std::size_t closure_sequence_mismatches(std::uint64_t seed, std::size_t n, std::size_t steps) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    PreferenceClosure p(n);
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    std::vector<std::vector<bool>> indiff(n, std::vector<bool>(n, false));
    std::size_t mismatches = 0;
    for (std::size_t step = 0; step < steps; ++step) {
        const std::size_t u = pick(rng), v = pick(rng);
        if (u == v || p.relation(u, v)) continue;
        if (rng() % 5 == 0) {
            p.insert_indifferent(u, v);
            indiff[u][v] = indiff[v][u] = true;
        } else {
            if (p.conflicts_with_indifference(u, v)) continue;
            p.insert_strict(u, v, [](std::size_t, std::size_t) {});
            edge[u][v] = true;
        }
        // Reachability by BFS from every vertex.
        bool ok = closure_violation(p).empty();
        for (std::size_t s = 0; s < n && ok; ++s) {
            std::vector<bool> seen(n, false);
            std::vector<std::size_t> stack{s};
            while (!stack.empty()) {
                const std::size_t a = stack.back();
                stack.pop_back();
                for (std::size_t b = 0; b < n; ++b)
                    if (edge[a][b] && !seen[b]) {
                        seen[b] = true;
                        stack.push_back(b);
                    }
            }
            for (std::size_t t = 0; t < n; ++t) {
                if (seen[t] != p.better(s, t)) ok = false;
                if (indiff[s][t] != p.indifferent(s, t)) ok = false;
            }
        }
        if (!ok) ++mismatches;
    }
    return mismatches;
}

/// The 15 story outcomes of the movie vote table, oriented x < y.
struct StoryRow {
    const char* x;
    const char* y;
    Outcome outcome;
};
inline const std::vector<StoryRow>& story_outcomes() {
    static const std::vector<StoryRow> rows{
        {"a", "b", Outcome::YBetter},     {"a", "c", Outcome::YBetter},     {"a", "d", Outcome::YBetter},
        {"a", "e", Outcome::XBetter},     {"a", "f", Outcome::XBetter},     {"b", "c", Outcome::Indifferent},
        {"b", "d", Outcome::Indifferent}, {"b", "e", Outcome::XBetter},     {"b", "f", Outcome::XBetter},
        {"c", "d", Outcome::XBetter},     {"c", "e", Outcome::XBetter},     {"c", "f", Outcome::XBetter},
        {"d", "e", Outcome::XBetter},     {"d", "f", Outcome::XBetter},     {"e", "f", Outcome::YBetter},
    };
    return rows;
}

/// Generated consistent instance for the small oracle sweeps.
inline GroundTruth small_instance(std::uint64_t seed, std::size_t max_n = 8, std::size_t max_c = 3) {
    Rng rng(seed);
    const std::size_t n = 2 + rng() % (max_n - 1);
    const std::size_t c = 1 + rng() % max_c;
    if (rng() % 2) return random_truth(n, c, rng);
    return gen_perturbed_truth(normal_scores(n, c, rng), rng);
}

/// Every strategy name, the four ablations included.
inline std::vector<StrategyKind> all_strategies() {
    return parse_strategy_list("bruteforce,randomq,randomp,frq,randomp-mo,frq-mo,+cq-mo,-cq+mo,-cq-mo");
}

}  // namespace pareto::testing
