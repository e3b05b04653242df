/*
 * Copyright (c) 2026, The LAWA Toolkit Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the latest-weight-averaging toolkit.
 *
 * Every function returns a lawa_status; LAWA_OK is zero. On failure a
 * human-readable message is available from lawa_last_error() on the calling
 * thread until the next failing call. Objects are opaque handles created by
 * *_create / returned through out-parameters and released with the matching
 * *_destroy. Handles are not synchronized: use one per thread or lock
 * externally.
 */
#ifndef LAWA_H
#define LAWA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LAWA_BUILDING_LIBRARY)
#    define LAWA_API __declspec(dllexport)
#  else
#    define LAWA_API __declspec(dllimport)
#  endif
#else
#  define LAWA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lawa_status {
    LAWA_OK = 0,
    LAWA_ERR_STRUCTURE_MISMATCH = 1,
    LAWA_ERR_NON_FINITE = 2,
    LAWA_ERR_NON_FINITE_GRAD = 3,
    LAWA_ERR_IO = 4,
    LAWA_ERR_FORMAT = 5,
    LAWA_ERR_EPOCH_ORDER = 6,
    LAWA_ERR_INTERNAL_STATE = 7,
    LAWA_ERR_CONFIG = 8,
    LAWA_ERR_SHAPE = 9,
    LAWA_ERR_EMPTY_DATA = 10,
    LAWA_ERR_SCHEMA = 11,
    LAWA_ERR_PARSE = 12,
    LAWA_ERR_INSUFFICIENT_CHECKPOINTS = 13,
    LAWA_ERR_USAGE = 14,
    LAWA_ERR_INVALID_ARGUMENT = 100, /* null handle or pointer */
    LAWA_ERR_UNKNOWN = 101
} lawa_status;

typedef enum lawa_dtype { LAWA_F32 = 0, LAWA_F64 = 1 } lawa_dtype;

typedef struct lawa_params lawa_params;
typedef struct lawa_ring lawa_ring;
typedef struct lawa_scheme lawa_scheme;
typedef struct lawa_config lawa_config;

LAWA_API const char* lawa_version(void);
LAWA_API const char* lawa_last_error(void);
LAWA_API const char* lawa_status_name(lawa_status status);
/* Process exit status for a result: 0 ok, 1 numerical/internal failure, 2 usage/config/data error. */
LAWA_API int lawa_exit_code(lawa_status status);

/* ---- parameter sets ---------------------------------------------------- */

LAWA_API lawa_status lawa_params_create(lawa_params** out);
LAWA_API void lawa_params_destroy(lawa_params* params);
/* Appends a tensor; values holds prod(dims) doubles (rounded to float for LAWA_F32). */
LAWA_API lawa_status lawa_params_add(lawa_params* params, const char* name, lawa_dtype dtype, const uint64_t* dims,
                                     uint32_t rank, const double* values);
LAWA_API size_t lawa_params_count(const lawa_params* params);
/* Borrowed views stay valid until the set is modified or destroyed. */
LAWA_API lawa_status lawa_params_entry(const lawa_params* params, size_t index, const char** name, lawa_dtype* dtype,
                                       uint32_t* rank, const uint64_t** dims, const double** values,
                                       uint64_t* count);
LAWA_API lawa_status lawa_params_add_scaled(const lawa_params* dst, const lawa_params* src, double c,
                                            lawa_params** out);
LAWA_API lawa_status lawa_params_scale(const lawa_params* params, double c, lawa_params** out);
LAWA_API lawa_status lawa_params_l2_distance(const lawa_params* a, const lawa_params* b, double* out);
/* *out = 1 when names, shapes, dtypes and element bits all match. */
LAWA_API lawa_status lawa_params_equal(const lawa_params* a, const lawa_params* b, int* out);

/* ---- checkpoint files -------------------------------------------------- */

LAWA_API lawa_status lawa_checkpoint_write(const char* path, const lawa_params* params, uint64_t epoch,
                                           uint64_t step);
LAWA_API lawa_status lawa_checkpoint_read(const char* path, lawa_params** out, uint64_t* epoch, uint64_t* step);

/* ---- averaging --------------------------------------------------------- */

LAWA_API lawa_status lawa_ring_create(size_t capacity, lawa_ring** out);
LAWA_API void lawa_ring_destroy(lawa_ring* ring);
LAWA_API lawa_status lawa_ring_push(lawa_ring* ring, const lawa_params* params, uint64_t epoch, uint64_t step);
LAWA_API size_t lawa_ring_size(const lawa_ring* ring);
/* *out is set to NULL while epoch + 1 < k, otherwise to a new set owned by the caller. */
LAWA_API lawa_status lawa_lawa_step(const lawa_ring* ring, uint64_t epoch, size_t k, lawa_params** out);
/* Mean of n sets. */
LAWA_API lawa_status lawa_uniform_average(const lawa_params* const* sets, size_t n, lawa_params** out);

/* kind: "none", "uniform", "ema", or "polyak". */
LAWA_API lawa_status lawa_scheme_create(const char* kind, size_t k, double alpha, lawa_scheme** out);
LAWA_API void lawa_scheme_destroy(lawa_scheme* scheme);
/* Feeds the checkpoint of save slot `epoch` (0, 1, 2, ...). *out is NULL when no average is defined yet. */
LAWA_API lawa_status lawa_scheme_absorb(lawa_scheme* scheme, const lawa_params* params, uint64_t epoch,
                                        uint64_t step, lawa_params** out);

/* ---- run configuration ------------------------------------------------- */

LAWA_API lawa_status lawa_config_create(lawa_config** out);
LAWA_API void lawa_config_destroy(lawa_config* config);
/* Keys are the config.resolved keys, e.g. "epochs", "scheme", "k", "save_every_steps". */
LAWA_API lawa_status lawa_config_set(lawa_config* config, const char* key, const char* value);
LAWA_API lawa_status lawa_config_load(lawa_config* config, const char* path);
/* Validates and collects warnings (e.g. k > 16); read them with lawa_config_warning. */
LAWA_API lawa_status lawa_config_validate(lawa_config* config, size_t* warning_count);
LAWA_API const char* lawa_config_warning(const lawa_config* config, size_t index);
/* Copies the resolved key=value text; *needed receives the size including the terminator. */
LAWA_API lawa_status lawa_config_resolved(const lawa_config* config, char* buffer, size_t capacity, size_t* needed);

/* ---- commands ---------------------------------------------------------- */

LAWA_API lawa_status lawa_train(const lawa_config* config, size_t* epochs_completed);
/* scheme: "uniform", "ema", or "polyak". prefix selects candidate files (<prefix>*.lawa); NULL means "ckpt_". */
LAWA_API lawa_status lawa_average_dir(const char* dir, size_t k, const char* scheme, double alpha,
                                      const char* prefix, const char* out);
/* split: "train", "val", or "all". bn_mode: "recompute", "copy", or "off". train_data may be NULL,
 * "config" (the configured dataset's training split) or a CSV path. */
LAWA_API lawa_status lawa_eval(const char* checkpoint, const lawa_config* config, const char* split,
                               const char* bn_mode, const char* train_data, double* loss, double* accuracy,
                               int* has_accuracy);
/* higher_is_better: 1, 0, or -1 to infer from the metric name. max_savings may be NULL, else holds n_runs values. */
LAWA_API lawa_status lawa_compare(const char* const* runs, size_t n_runs, const char* metric,
                                  const char* averaged_metric, int higher_is_better, const double* targets,
                                  size_t n_targets, size_t early_epochs, const char* out, uint64_t* max_savings);
LAWA_API lawa_status lawa_compare_schemes(const lawa_config* config, const char* out_dir);
LAWA_API lawa_status lawa_sweep_k(const lawa_config* config, const size_t* ks, size_t n, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* LAWA_H */
