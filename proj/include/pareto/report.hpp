#pragma once

#include <string>
#include <vector>

#include "pareto/engine.hpp"
#include "pareto/simulation.hpp"

namespace pareto {

/// Iteration table: i, outcome (the x object in brackets), derived facts
/// and dominances, the pair with the criteria still unknown for it, and the
/// partition whenever it changes.
/// Ends with the Pareto labels.  Needs a transcript with derived entries.
std::string replay_table(const Transcript& t);

/// One JSON object per transcript entry:
/// {"i", "x", "y", "c", "outcome", "source", "confirmed", "unknown", "dominated"}.
std::string transcript_jsonl(const Transcript& t);

struct StrategySummary {
    std::size_t n = 0;
    std::size_t criteria = 0;
    std::string strategy;
    std::size_t runs = 0;
    double mean_asked = 0;
    std::uint64_t min_asked = 0;
    std::uint64_t max_asked = 0;
    double mean_lower_bound = 0;
    /// mean asked / mean lower bound, and / brute-force questions (|C| n(n-1)/2).
    double ratio_lower_bound = 0;
    double ratio_brute_force = 0;
};

/// Per (n, criteria, strategy), in order of first appearance.
std::vector<StrategySummary> summarize(const std::vector<ExperimentRow>& rows);
std::string summary_table(const std::vector<StrategySummary>& s);

}  // namespace pareto
