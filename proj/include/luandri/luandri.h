/*
 * luandri.h - flat C interface to the luandri query environment.
 *
 * Plain C declarations only, so the file can be fed to an FFI declaration
 * parser (e.g. LuaJIT's ffi.cdef) as-is, after stripping the preprocessor
 * lines.
 *
 * Handles are opaque 64-bit identifiers; 0 is never a valid handle.
 *
 * Ownership:
 *   - Request data belongs to the caller and is only read during the call.
 *   - Strings in a luandri_result belong to the result set and stay valid
 *     until luandri_results_destroy (or destroy of the owning environment).
 *   - luandri_last_error's string stays valid until the next call on the
 *     same environment.
 *
 * Record layouts (x86-64 / AArch64 LP64, 64-bit fields naturally aligned):
 *
 *   luandri_request                     size 48, align 8
 *     offset  0  const char*          query
 *     offset  8  int32_t              results_requested
 *     offset 12  (4 bytes padding)
 *     offset 16  const int64_t*       doc_ids
 *     offset 24  int64_t              doc_id_count      (0 = no restriction)
 *     offset 32  const char* const*   stopwords
 *     offset 40  int64_t              stopword_count    (0 = none)
 *
 *   luandri_result                      size 32, align 8
 *     offset  0  int64_t              docid
 *     offset  8  const char*          document_name
 *     offset 16  const char*          snippet
 *     offset 24  double               score
 */
#ifndef LUANDRI_H
#define LUANDRI_H

#include <stdint.h>

#if defined(LUANDRI_BUILDING_LIBRARY)
#define LUANDRI_API __attribute__((visibility("default")))
#else
#define LUANDRI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef uint64_t luandri_env;
typedef uint64_t luandri_results;

enum luandri_status {
    LUANDRI_OK = 0,
    LUANDRI_INVALID_ARGUMENT = 1,
    LUANDRI_PARSE_ERROR = 2,
    LUANDRI_IO_ERROR = 3,
    LUANDRI_INTERNAL_ERROR = 4
};

typedef struct luandri_request {
    const char* query;
    int32_t results_requested;
    const int64_t* doc_ids;
    int64_t doc_id_count;
    const char* const* stopwords;
    int64_t stopword_count;
} luandri_request;

typedef struct luandri_result {
    int64_t docid;
    const char* document_name;
    const char* snippet;
    double score;
} luandri_result;

/* Returns a new, empty environment (0 only if allocation fails). */
LUANDRI_API luandri_env luandri_env_create(void);

/* Releases the environment and every result set it produced. */
LUANDRI_API int32_t luandri_env_destroy(luandri_env env);

/* Opens an index directory and adds it to the searched collection. */
LUANDRI_API int32_t luandri_env_add_index(luandri_env env, const char* path);

/* Runs a query. On success *out receives a result-set handle; on failure
   *out is set to 0 and the status says why. */
LUANDRI_API int32_t luandri_env_run_query(luandri_env env, const luandri_request* request, luandri_results* out);

/* Number of results, or -1 for an unknown handle. */
LUANDRI_API int64_t luandri_results_count(luandri_results results);

/* Copies the index-th result (rank order) into *out. Out of range: returns
   LUANDRI_INVALID_ARGUMENT and writes a sentinel (docid -1, empty strings,
   score 0). */
LUANDRI_API int32_t luandri_results_get(luandri_results results, int64_t index, luandri_result* out);

LUANDRI_API int32_t luandri_results_destroy(luandri_results results);

/* Message of the most recent failing call on env; "" when the last call
   succeeded. */
LUANDRI_API const char* luandri_last_error(luandri_env env);

#ifdef __cplusplus
}
#endif

#endif /* LUANDRI_H */
