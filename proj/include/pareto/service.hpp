#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pareto/aggregation.hpp"
#include "pareto/engine.hpp"
#include "pareto/selection.hpp"
#include "pareto/types.hpp"

namespace pareto {

struct SessionSpec {
    std::vector<std::string> objects;
    std::vector<std::string> criteria;
    StrategyKind strategy = StrategyKind::frq();
    AggregationConfig cfg;
    /// Responses (skips included) after which a question finalizes anyway.
    /// nullopt means 3 * k_min, 0 means no cap.
    std::optional<std::uint32_t> response_cap;
    std::uint64_t seed = 1;

    std::uint32_t effective_cap() const { return response_cap ? *response_cap : 3 * cfg.k_min; }
};

enum class SessionStatus : std::uint8_t { Active, Terminal };

struct VoteReceipt {
    bool finalized = false;
    /// Aggregated outcome and the outcome actually kept after resolution.
    std::optional<Outcome> aggregated;
    std::optional<Outcome> kept;
};

/// One live elicitation: the engine plus the tally of the open question.
/// Not thread safe; SessionRegistry serializes access.
class Session {
public:
    Session(std::string id, SessionSpec spec);

    const std::string& id() const { return id_; }
    const SessionSpec& spec() const { return spec_; }
    SessionStatus status() const;
    const Elicitation& engine() const { return engine_; }
    const Universe& universe() const { return engine_.universe(); }

    /// Open question and its id; nullopt once terminal.
    std::optional<Question> current() const { return current_; }
    std::uint64_t question_id() const { return question_id_; }
    const VoteTally& tally() const { return tally_; }

    /// Throws SessionTerminal, StaleQuestion, or InvalidArgument.
    VoteReceipt vote(std::uint64_t question_id, Vote v, const std::string& respondent);

    /// Candidate questions still open (full recount).
    std::size_t remaining_candidates() const;

    /// Versioned JSON with a checksum; load() throws CorruptSnapshot when the
    /// checksum, schema or replay does not match.
    std::string snapshot() const;
    static std::unique_ptr<Session> load(const std::string& snapshot);

private:
    struct Finalized {
        Question question;
        Outcome proposed;
    };

    // Builds the engine without selecting a question; used by load().
    Session(std::string id, SessionSpec spec, int);

    void advance();
    void finalize(Outcome proposed, VoteReceipt& receipt);

    std::string id_;
    SessionSpec spec_;
    Elicitation engine_;
    std::optional<Question> current_;
    std::uint64_t question_id_ = 0;
    VoteTally tally_;
    std::vector<Finalized> history_;
    std::vector<std::string> respondents_;
};

std::string_view to_string(SessionStatus s);

/// JSON views used by the HTTP API and the C API.
std::string question_json(const Session& s);
std::string state_json(const Session& s);
std::string result_json(const Session& s);

/// Dominance graph in DOT: an edge u -> v for every established
/// "u dominates v", no transitive reduction.  Confirmed Pareto-optimal
/// objects are drawn with a double border.  Non-terminal sessions are
/// labelled as drafts.
std::string dominance_dot(const KnowledgeBase& kb, const Partition& part, const Universe& u);
std::string dominance_dot(const Session& s);

/// Parses the POST /sessions body: {"objects", "criteria"} or
/// {"fixture"}, plus optional "strategy", "k_min", "theta",
/// "response_cap", "seed".  Throws InvalidSpec.
SessionSpec parse_session_spec(const std::string& body);

/// Concurrent sessions, each behind its own mutex.
class SessionRegistry {
public:
    /// When persist_dir is not empty every session is written there after
    /// each finalized question, and existing snapshots are loaded.
    explicit SessionRegistry(std::string persist_dir = "");

    std::string create(SessionSpec spec);
    bool contains(const std::string& id) const;

    /// Runs fn with the session locked.  Throws UnknownSession.
    template <typename Fn>
    auto with(const std::string& id, Fn&& fn) {
        auto entry = find(id);
        std::lock_guard lock(entry->mu);
        if constexpr (std::is_void_v<decltype(fn(*entry->session))>) {
            fn(*entry->session);
            persist(*entry->session);
        } else {
            auto r = fn(*entry->session);
            persist(*entry->session);
            return r;
        }
    }

    std::vector<std::string> ids() const;

private:
    struct Entry {
        std::mutex mu;
        std::unique_ptr<Session> session;
    };
    std::shared_ptr<Entry> find(const std::string& id) const;
    void persist(const Session& s) const;

    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::string persist_dir_;
    std::uint64_t counter_ = 0;
    std::uint64_t salt_;
};

/// HTTP status for an error code raised by the service.
int http_status(ErrorCode code);

}  // namespace pareto
