/* C interface to the pareto elicitation library.
 *
 * Every function returning int returns a pareto_status.  On failure the
 * message is available from pareto_last_error() on the same thread.
 * Strings returned through char** are owned by the caller and released with
 * pareto_string_free().
 */
#ifndef PARETO_H
#define PARETO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pareto_status {
    PARETO_OK = 0,
    PARETO_E_INVALID_ARGUMENT,
    PARETO_E_DIRECT_CONTRADICTION,
    PARETO_E_ALREADY_KNOWN,
    PARETO_E_EXHAUSTED,
    PARETO_E_INSUFFICIENT_VOTES,
    PARETO_E_UNRESOLVABLE,
    PARETO_E_INVALID_SPEC,
    PARETO_E_SESSION_TERMINAL,
    PARETO_E_STALE_QUESTION,
    PARETO_E_UNKNOWN_SESSION,
    PARETO_E_CORRUPT_SNAPSHOT,
    PARETO_E_INCOMPLETE_DATASET,
    PARETO_E_ORACLE_MISMATCH,
    PARETO_E_TOO_LARGE,
    PARETO_E_IO,
    PARETO_E_INTERNAL
} pareto_status;

const char* pareto_version(void);
/* "InvalidSpec" style name of a status. */
const char* pareto_status_name(int status);
/* Message of the last failure on this thread; "" when none. */
const char* pareto_last_error(void);
void pareto_string_free(char* s);

/* |C| * n when k == 0, otherwise the minimum number of questions needed to
 * establish a Pareto set of size k. */
uint64_t pareto_lower_bound(uint64_t objects, uint64_t criteria, uint64_t pareto);

/* ---- sessions ---------------------------------------------------------- */

typedef struct pareto_session pareto_session;

/* spec_json: {"objects", "criteria"} or {"fixture"}, plus optional
 * "strategy", "k_min", "theta", "response_cap", "seed". */
int pareto_session_create(const char* spec_json, pareto_session** out);
int pareto_session_load(const char* snapshot, pareto_session** out);
void pareto_session_free(pareto_session* s);

/* vote: "prefer_x", "prefer_y", "indifferent" or "skip".  finalized may be
 * NULL. */
int pareto_session_vote(pareto_session* s, uint64_t question_id, const char* vote, const char* respondent,
                        int* finalized);

/* JSON views, the DOT dominance graph and the snapshot. */
int pareto_session_question(const pareto_session* s, char** out);
int pareto_session_state(const pareto_session* s, char** out);
int pareto_session_result(const pareto_session* s, char** out);
int pareto_session_dot(const pareto_session* s, char** out);
int pareto_session_snapshot(const pareto_session* s, char** out);

/* ---- simulation -------------------------------------------------------- */

typedef struct pareto_simulate_options {
    const char* objects;    /* comma list, e.g. "100,1000" */
    const char* criteria;   /* comma list */
    const char* strategies; /* comma list of strategy names */
    size_t replicates;
    uint64_t base_seed;
    double noise;
    uint32_t k;
    double theta;
    int verify;
    size_t jobs;            /* 0: hardware concurrency */
    const char* fixture;    /* dataset name or path with a ground truth; NULL for generated */
    int timing;             /* fill runtime_ms in CSV lines */
} pareto_simulate_options;

void pareto_simulate_defaults(pareto_simulate_options* o);

/* Called with each CSV line (no newline) in grid order. */
typedef void (*pareto_row_fn)(const char* csv_line, void* user);

/* Writes the CSV header through on_row first.  summary_out (may be NULL)
 * receives JSON {"strategies": [...], "table", "oracle_mismatches",
 * "bound_violations", "termination_mismatches", "index_mismatches",
 * "failures"}.  Returns PARETO_E_ORACLE_MISMATCH when any verification
 * counter is nonzero; the summary is still filled in. */
int pareto_simulate(const pareto_simulate_options* o, pareto_row_fn on_row, void* user, char** summary_out);

/* ---- datasets ---------------------------------------------------------- */

/* format: "table" or "jsonl". */
int pareto_replay(const char* dataset, const char* strategy, uint64_t seed, uint32_t k_min, double theta,
                  const char* format, char** out);
/* Comma separated built-in fixture names. */
int pareto_fixture_names(char** out);
int pareto_fixture_json(const char* name, char** out);

/* ---- server ------------------------------------------------------------ */

typedef void (*pareto_ready_fn)(int port, void* user);

/* Blocks serving the session API.  port 0 picks a free port; on_ready (may
 * be NULL) gets the bound port. */
int pareto_serve(const char* host, int port, const char* static_dir, const char* persist_dir,
                 pareto_ready_fn on_ready, void* user);

#ifdef __cplusplus
}
#endif

#endif
