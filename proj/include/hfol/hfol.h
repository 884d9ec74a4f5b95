#ifndef HFOL_H
#define HFOL_H

/* C interface to the interpreter. Handles are opaque. Every function that can
   fail returns an hfol_status; on failure the message is available from
   hfol_last_error() on the calling thread until the next call.

   Reports are JSON documents with "schema": "hfol-report/1"
   (docs/schemas/report.schema.json). A report string is owned by the caller
   and released with hfol_string_free. Suites that run to completion but find
   a failure return HFOL_ERR_VERIFICATION and still fill the report. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HFOL_API __declspec(dllexport)
#else
#define HFOL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hfol_status {
  HFOL_OK = 0,
  HFOL_ERR_USAGE = 1,
  HFOL_ERR_PARSE = 2,
  HFOL_ERR_TYPE = 3,
  HFOL_ERR_SIZE_GUARD = 4,
  HFOL_ERR_VERIFICATION = 5,
  HFOL_ERR_IO = 6,
  HFOL_ERR_INTERNAL = 7
} hfol_status;

typedef struct hfol_options hfol_options;
typedef struct hfol_signature hfol_signature;
typedef struct hfol_structure hfol_structure;

HFOL_API const char* hfol_version(void);
HFOL_API const char* hfol_last_error(void);
HFOL_API const char* hfol_status_name(hfol_status s);
HFOL_API void hfol_string_free(char* s);

/* Options: backend "auto" (default), "set" or "groupoid"; seed 1; fiber
   bound 10000 objects or proofs. */
HFOL_API hfol_status hfol_options_new(hfol_options** out);
HFOL_API void hfol_options_free(hfol_options* o);
HFOL_API hfol_status hfol_options_set_backend(hfol_options* o, const char* backend);
HFOL_API hfol_status hfol_options_set_seed(hfol_options* o, uint64_t seed);
HFOL_API hfol_status hfol_options_set_max_fiber(hfol_options* o, size_t max_fiber);

HFOL_API hfol_status hfol_signature_parse(const char* json_text, hfol_signature** out);
HFOL_API hfol_status hfol_signature_of(const hfol_structure* s, hfol_signature** out);
HFOL_API void hfol_signature_free(hfol_signature* sig);

/* Set or groupoid structure, chosen by the document's "format". */
HFOL_API hfol_status hfol_structure_parse(const char* json_text, hfol_structure** out);
HFOL_API hfol_status hfol_structure_load(const char* path, hfol_structure** out);
HFOL_API void hfol_structure_free(hfol_structure* s);
/* "set" or "groupoid"; static storage. */
HFOL_API const char* hfol_structure_backend(const hfol_structure* s);

/* Reads a whole file into a string released with hfol_string_free. */
HFOL_API hfol_status hfol_read_file(const char* path, char** out);

/* context: comma-separated "x:A" declarations, possibly empty. */
HFOL_API hfol_status hfol_check(const hfol_signature* sig, const char* formula,
                                const char* context, char** report);
HFOL_API hfol_status hfol_eval(const hfol_structure* s, const char* formula,
                               const char* context, const hfol_options* o,
                               char** report);
/* s may be NULL: typecheck only. */
HFOL_API hfol_status hfol_prove_check(const hfol_signature* sig, const char* proof_text,
                                      const hfol_structure* s, const hfol_options* o,
                                      char** report);
/* s may be NULL: a built-in structure for the selected backend. */
HFOL_API hfol_status hfol_relations(const hfol_structure* s, size_t per_family,
                                    const hfol_options* o, char** report);
/* formulas: n_formulas strings; with none, a closed pool of pool_size
   formulas of depth at most pool_depth drawn from the seed. */
HFOL_API hfol_status hfol_invariance(const hfol_structure* m, const hfol_structure* n,
                                     const char* equivalence_json,
                                     const char* const* formulas, size_t n_formulas,
                                     const char* context, size_t pool_size,
                                     size_t pool_depth, const hfol_options* o,
                                     char** report);
HFOL_API hfol_status hfol_examples(const hfol_options* o, char** report);

/* Renders a report for a terminal. */
HFOL_API hfol_status hfol_report_to_text(const char* report, char** out);

#ifdef __cplusplus
}
#endif

#endif
