#include "pareto/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <tuple>

#include "json.hpp"

namespace pareto {

namespace {

std::string set_of(const Universe& u, const std::vector<ObjectId>& ids) {
    if (ids.empty()) return "{}";
    std::string out = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + u.object_label(ids[i]);
    return out + "}";
}

std::string render(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (width.size() <= i) width.push_back(0);
            width[i] = std::max(width[i], r[i].size());
        }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) line += " | ";
            line += r[i] + std::string(width[i] - r[i].size(), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

}  // namespace

std::string replay_table(const Transcript& t) {
    const Universe& u = t.universe;
    const std::size_t n = u.object_count();
    KnowledgeBase kb(n, u.criterion_count());
    Partition part = compute_partition(kb);

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"i", "outcome", "derived", "(x,y), C_xy", "O_ok", "O_?", "O_x"});
    rows.push_back({"", "", "", "", set_of(u, part.confirmed()), set_of(u, part.unknown()), set_of(u, part.dominated())});

    const auto& es = t.entries;
    for (std::size_t i = 0; i < es.size(); ++i) {
        const TranscriptEntry& e = es[i];
        if (e.source == EntrySource::Derived) continue;
        const Question& q = e.question;
        std::vector<std::string> derived;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> touched;
        auto touch = [&](ObjectId a, ObjectId b) { touched.emplace_back(std::min(a.value, b.value), std::max(a.value, b.value)); };
        std::string outcome = describe(u, q, e.outcome);
        if (e.source == EntrySource::Resolved) outcome += " *";
        if (!kb.outcome_of(q)) {
            kb.record_outcome(q, e.outcome);
            touch(q.x, q.y);
        }
        for (std::size_t j = i + 1; j < es.size() && es[j].source == EntrySource::Derived; ++j) {
            derived.push_back(describe(u, Fact{es[j].question.x, es[j].question.y, es[j].question.c}));
            touch(es[j].question.x, es[j].question.y);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (const auto& [a, b] : touched)
            for (const auto& [p, r] : {std::pair{a, b}, std::pair{b, a}})
                if (kb.dominates(ObjectId{p}, ObjectId{r}))
                    derived.push_back(u.object_label(ObjectId{p}) + ">>" + u.object_label(ObjectId{r}));

        std::string remaining;
        for (std::uint32_t c = 0; c < u.criterion_count(); ++c)
            if (!kb.outcome_of(q.x, q.y, CriterionId{c}))
                remaining += (remaining.empty() ? "" : ",") + u.criterion_label(CriterionId{c});
        const std::string pair =
            "(" + u.object_label(q.x) + "," + u.object_label(q.y) + "), {" + remaining + "}";

        std::string joined;
        for (const auto& d : derived) joined += (joined.empty() ? "" : ", ") + d;

        const Partition next = compute_partition(kb);
        std::vector<std::string> row{std::to_string(e.iteration), outcome, joined, pair, "", "", ""};
        if (next != part) {
            row[4] = set_of(u, next.confirmed());
            row[5] = set_of(u, next.unknown());
            row[6] = set_of(u, next.dominated());
            part = next;
        }
        rows.push_back(std::move(row));
    }
    std::string out = render(rows);
    out += "asked: " + std::to_string(t.questions_asked) + "\n";
    out += "pareto: " + set_of(u, t.pareto()) + "\n";
    return out;
}

std::string transcript_jsonl(const Transcript& t) {
    const Universe& u = t.universe;
    std::string out;
    for (const auto& e : t.entries) {
        nlohmann::ordered_json j{{"i", e.iteration},
                                 {"x", u.object_label(e.question.x)},
                                 {"y", u.object_label(e.question.y)},
                                 {"c", u.criterion_label(e.question.c)},
                                 {"outcome", to_string(e.outcome)},
                                 {"source", to_string(e.source)},
                                 {"confirmed", e.confirmed},
                                 {"unknown", e.unknown},
                                 {"dominated", e.dominated}};
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<StrategySummary> summarize(const std::vector<ExperimentRow>& rows) {
    struct Acc {
        StrategySummary s;
        double asked = 0, bound = 0, bf = 0;
    };
    std::vector<Acc> acc;
    std::map<std::tuple<std::size_t, std::size_t, std::string>, std::size_t> index;
    for (const auto& r : rows) {
        auto [it, fresh] = index.emplace(std::tuple{r.n, r.criteria, r.strategy}, acc.size());
        if (fresh) {
            acc.push_back({});
            acc.back().s.n = r.n;
            acc.back().s.criteria = r.criteria;
            acc.back().s.strategy = r.strategy;
            acc.back().s.min_asked = r.questions_asked;
        }
        Acc& a = acc[it->second];
        ++a.s.runs;
        a.asked += static_cast<double>(r.questions_asked);
        a.bound += static_cast<double>(r.lower_bound);
        a.bf += static_cast<double>(r.criteria) * static_cast<double>(r.n) * static_cast<double>(r.n - 1) / 2.0;
        a.s.min_asked = std::min(a.s.min_asked, r.questions_asked);
        a.s.max_asked = std::max(a.s.max_asked, r.questions_asked);
    }
    std::vector<StrategySummary> out;
    for (auto& a : acc) {
        const double runs = static_cast<double>(a.s.runs);
        a.s.mean_asked = a.asked / runs;
        a.s.mean_lower_bound = a.bound / runs;
        a.s.ratio_lower_bound = a.bound > 0 ? a.asked / a.bound : 0.0;
        a.s.ratio_brute_force = a.bf > 0 ? a.asked / a.bf : 0.0;
        out.push_back(a.s);
    }
    return out;
}

std::string summary_table(const std::vector<StrategySummary>& s) {
    auto fmt = [](double v, const char* f) {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return std::string(buf);
    };
    std::vector<std::vector<std::string>> rows{{"n", "|C|", "strategy", "runs", "mean", "min", "max", "asked/LB", "asked/BF"}};
    for (const auto& x : s)
        rows.push_back({std::to_string(x.n), std::to_string(x.criteria), x.strategy, std::to_string(x.runs), fmt(x.mean_asked, "%.1f"), std::to_string(x.min_asked),
                        std::to_string(x.max_asked), fmt(x.ratio_lower_bound, "%.3f"),
                        fmt(x.ratio_brute_force, "%.4f")});
    return render(rows);
}

}  // namespace pareto
