/*
 * C interface to the eidsgrep structural query engine.
 *
 * All strings are UTF-8. Functions return an eg_status; on failure a
 * description is available from eg_last_error() on the same thread until the
 * next failing call. Handles are opaque and must be released with the
 * matching *_free function. A compiled query and an opened dictionary are
 * immutable and may be shared between threads; everything else is
 * single-threaded.
 */
#ifndef EIDSGREP_H
#define EIDSGREP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(eidsgrep_EXPORTS)
#    define EG_API __declspec(dllexport)
#  else
#    define EG_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__)
#  define EG_API __attribute__((visibility("default")))
#else
#  define EG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eg_status {
    EG_OK = 0,
    EG_ERR_INVALID_ARGUMENT = 1,
    EG_ERR_PARSE = 2,
    EG_ERR_IO = 3,
    EG_ERR_STALE_INDEX = 4,
    EG_ERR_UNSUPPORTED = 5,
    EG_ERR_QUERY = 6,
    EG_ERR_INTERNAL = 7
} eg_status;

typedef enum eg_memo_mode {
    EG_MEMO_AUTO = 0,
    EG_MEMO_ON = 1,
    EG_MEMO_OFF = 2
} eg_memo_mode;

typedef enum eg_severity {
    EG_RECOVERABLE = 0,
    EG_FATAL = 1
} eg_severity;

typedef struct eg_query eg_query;
typedef struct eg_dict eg_dict;

typedef struct eg_scan_options {
    int use_lambda;        /* nonzero: apply the lambda filter layer */
    int use_bdd;           /* nonzero: apply the BDD filter layer */
    eg_memo_mode memo;
    unsigned threads;      /* 0 or 1: single-threaded */
} eg_scan_options;

typedef struct eg_scan_stats {
    uint64_t entries;
    uint64_t lambda_passes;
    uint64_t bdd_passes;
    uint64_t tree_matches;
    double cpu_seconds;
    double wall_seconds;
} eg_scan_stats;

/* Receives a chunk of text; `text` is not NUL-terminated. */
typedef void (*eg_text_fn)(void* user, const char* text, size_t len);
/* Receives one matching entry: its original text and its canonical form. */
typedef void (*eg_hit_fn)(void* user, const char* text, size_t len, const char* cooked,
                          size_t cooked_len);
typedef void (*eg_diag_fn)(void* user, size_t offset, eg_severity severity, const char* message);

EG_API const char* eg_version(void);
EG_API const char* eg_last_error(void);
EG_API const char* eg_status_name(eg_status status);

/* Replaces the functor alias table with the contents of a
 * `spelling TAB canonical` file. Call before any parsing. */
EG_API eg_status eg_load_aliases(const char* path);

/* Default scan options: both layers on, automatic memoization, one thread. */
EG_API eg_scan_options eg_scan_options_default(void);

/* Compiles a pattern that must contain exactly one tree. `bdd_cap` of 0
 * selects the default node limit (1000). */
EG_API eg_status eg_query_compile(const char* pattern, size_t len, size_t bdd_cap, eg_query** out);
/* Compiles the OR of several patterns. */
EG_API eg_status eg_query_compile_any(const char* const* patterns, const size_t* lens, size_t count,
                                      size_t bdd_cap, eg_query** out);
EG_API void eg_query_free(eg_query* query);
EG_API int eg_query_memoizes(const eg_query* query);
/* Canonical text of the query's needle. */
EG_API eg_status eg_query_text(const eg_query* query, eg_text_fn fn, void* user);

/* Opens a dictionary. `index_path` may be NULL for an unindexed scan;
 * otherwise the index must exist and match the dictionary. */
EG_API eg_status eg_dict_open(const char* dict_path, const char* index_path, eg_dict** out);
EG_API void eg_dict_free(eg_dict* dict);
EG_API int eg_dict_indexed(const eg_dict* dict);

EG_API eg_status eg_scan(const eg_dict* dict, const eg_query* query, const eg_scan_options* options,
                         eg_hit_fn on_hit, void* user, eg_scan_stats* stats);

/* Scans standard-input style text that has no index. */
EG_API eg_status eg_scan_text(const char* text, size_t len, const eg_query* query,
                              const eg_scan_options* options, eg_hit_fn on_hit, void* user,
                              eg_scan_stats* stats);

/* Builds the index for `dict_path` and writes it to `index_path`.
 * `records` (nullable) receives the record count. */
EG_API eg_status eg_index_build(const char* dict_path, const char* index_path, eg_diag_fn diag,
                                void* user, uint32_t* records);

/* Converts `character TAB ids` rows into cooked dictionary lines. */
EG_API eg_status eg_ingest_tsv(const char* tsv_path, eg_text_fn out, eg_diag_fn diag, void* user);

/* Parses a stream of trees and writes each in canonical form, one per line. */
EG_API eg_status eg_cook(const char* text, size_t len, eg_text_fn out, eg_diag_fn diag, void* user);

/* Writes the benchmark query set, one query per line. `pivot` may be NULL
 * for the default. */
EG_API eg_status eg_bench_generate(const char* dict_path, const char* seeds_path, const char* pivot,
                                   eg_text_fn out, void* user);

#ifdef __cplusplus
}
#endif

#endif
