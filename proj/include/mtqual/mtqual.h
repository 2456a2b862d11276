/*
 * Copyright 2026 The mtqual Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the mtqual machine-translation evaluation library.
 *
 * Objects are opaque handles created by *_create / *_load / *_run
 * functions and released with the matching *_free. Every fallible call
 * returns an mtqual_status; on failure mtqual_last_error() describes the
 * problem (the message is thread-local and valid until the next call on
 * the same thread). Strings returned through char** out-parameters are
 * owned by the caller and must be released with mtqual_string_free().
 *
 * Configuration and results cross the boundary as UTF-8 JSON text.
 */

#ifndef MTQUAL_MTQUAL_H_
#define MTQUAL_MTQUAL_H_

#include <stddef.h>

#if defined(MTQUAL_BUILDING_LIBRARY)
#define MTQUAL_API __attribute__((visibility("default")))
#else
#define MTQUAL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mtqual_status {
  MTQUAL_OK = 0,
  MTQUAL_ERROR_INVALID_ARGUMENT = 1, /* bad option, configuration or value */
  MTQUAL_ERROR_IO = 2,               /* missing or unreadable file, bind failure */
  MTQUAL_ERROR_INGESTION = 3,        /* invalid UTF-8 and similar input defects */
  MTQUAL_ERROR_ALIGNMENT = 4,        /* line counts of aligned files differ */
  MTQUAL_ERROR_SCORING = 5,          /* metric undefined for the given data */
  MTQUAL_ERROR_UNDEFINED = 6,        /* undefined precision or correlation */
  MTQUAL_ERROR_NOT_FOUND = 7,
  MTQUAL_ERROR_INTERNAL = 8
} mtqual_status;

typedef struct mtqual_evalset mtqual_evalset;
typedef struct mtqual_matrix mtqual_matrix;
typedef struct mtqual_service mtqual_service;

MTQUAL_API const char* mtqual_version(void);
MTQUAL_API const char* mtqual_last_error(void);
MTQUAL_API const char* mtqual_status_name(mtqual_status status);
MTQUAL_API void mtqual_string_free(char* s);

/* policy_json: NULL or {"case_fold":bool,"split_punctuation":bool}.
 * Writes a JSON array of tokens. */
MTQUAL_API mtqual_status mtqual_tokenize(const char* text, const char* policy_json, char** out_json);

/* Manifest: {"documents":[{"id":..,"systems":{name:path},"references":[paths],"source":path?}]} */
MTQUAL_API mtqual_status mtqual_evalset_load_manifest(const char* manifest_path, const char* policy_json,
                                                      mtqual_evalset** out);
/* One document "doc1", one system "candidate". */
MTQUAL_API mtqual_status mtqual_evalset_load_files(const char* candidate_path, const char* const* reference_paths,
                                                   size_t reference_count, const char* policy_json,
                                                   mtqual_evalset** out);
MTQUAL_API mtqual_status mtqual_evalset_describe(const mtqual_evalset* set, char** out_json);
MTQUAL_API void mtqual_evalset_free(mtqual_evalset* set);

/* metric_json: {"metric":"bleu"|"nist"|"gtm"|"meteor"|"ter", metric options..., "level":"corpus"|"sentence"}.
 * Scores every (system, document) of the set against all reference versions. */
MTQUAL_API mtqual_status mtqual_score(const mtqual_evalset* set, const char* metric_json, char** out_json);

/* NIST information weights of all references as `ngram<TAB>weight` lines. */
MTQUAL_API mtqual_status mtqual_nist_info_table(const mtqual_evalset* set, size_t max_order, char** out_tsv);

/* options_json: {"metrics":[name or metric object...],"single_references":bool,
 *                "all_references":bool,"sentence_level":bool,"threads":n} */
MTQUAL_API mtqual_status mtqual_matrix_run(const mtqual_evalset* set, const char* options_json, mtqual_matrix** out);
MTQUAL_API size_t mtqual_matrix_cell_count(const mtqual_matrix* matrix);
MTQUAL_API size_t mtqual_matrix_failed_count(const mtqual_matrix* matrix);
/* format: "csv", "json", "md" or "sentences". */
MTQUAL_API mtqual_status mtqual_matrix_render(const mtqual_matrix* matrix, const char* format, char** out);
MTQUAL_API void mtqual_matrix_free(mtqual_matrix* matrix);

/* options_json: {"metrics":[...],"granularity":"system"|"segment","reference":"All"|"Ref1"...,
 *                "human_parameter":null|1..10} */
MTQUAL_API mtqual_status mtqual_correlate(const mtqual_evalset* set, const char* ratings_csv_path,
                                          const char* options_json, char** out_json);

/* Static strings; do not free. */
MTQUAL_API mtqual_status mtqual_parameter_label(int parameter, const char** out);
MTQUAL_API mtqual_status mtqual_scale_label(int rating, const char** out);

/* data_dir NULL or empty: $MTQUAL_DATA_DIR, else ./mtqual-data. static_dir may be NULL.
 * The service keeps its own reference to the set. */
MTQUAL_API mtqual_status mtqual_service_create(const mtqual_evalset* set, const char* data_dir,
                                               const char* static_dir, mtqual_service** out);
/* port 0 picks a free port; bound_port may be NULL. */
MTQUAL_API mtqual_status mtqual_service_bind(mtqual_service* service, const char* host, int port, int* bound_port);
/* Blocks until mtqual_service_stop() is called from another thread. */
MTQUAL_API mtqual_status mtqual_service_run(mtqual_service* service);
MTQUAL_API void mtqual_service_stop(mtqual_service* service);
MTQUAL_API void mtqual_service_free(mtqual_service* service);

/* Read-only export of a ratings log as CSV; safe while a service runs. */
MTQUAL_API mtqual_status mtqual_export_ratings(const char* data_dir, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* MTQUAL_MTQUAL_H_ */
