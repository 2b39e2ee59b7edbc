/* Copyright 2026 The MCCD Lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the MCCD lab shared library.
 *
 * All functions return MCCD_OK (0) on success or a nonzero status code;
 * mccd_last_error() returns a thread-local message for the most recent
 * failure. Objects are opaque handles paired with _destroy functions.
 * Strings returned through `char **` out-params are heap-allocated and must
 * be released with mccd_string_free().
 */

#ifndef MCCD_MCCD_H_
#define MCCD_MCCD_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t mccd_status;

enum {
    MCCD_OK = 0,
    MCCD_ERR_INVALID_ARGUMENT = 1,
    MCCD_ERR_IO = 2,
    MCCD_ERR_FORMAT = 3,
    MCCD_ERR_MISMATCH = 4,
    MCCD_ERR_UNSUPPORTED = 5,
    MCCD_ERR_TOO_LARGE = 6,
    MCCD_ERR_INTERNAL = 7,
};

uint32_t mccd_version(void);
const char *mccd_status_name(mccd_status status);
const char *mccd_last_error(void);
void mccd_string_free(char *s);

/* ---- Code layout -------------------------------------------------------- */

typedef struct mccd_layout_t mccd_layout_t;

mccd_status mccd_layout_create(int32_t distance, mccd_layout_t **out);
void mccd_layout_destroy(mccd_layout_t *layout);
int32_t mccd_layout_num_data_qubits(const mccd_layout_t *layout);
int32_t mccd_layout_num_stabilizers(const mccd_layout_t *layout);
/* 1 if all layout invariants hold, else 0. */
int32_t mccd_layout_check(const mccd_layout_t *layout);

/* ---- Logical circuits ---------------------------------------------------- */

typedef struct mccd_circuit_t mccd_circuit_t;

/* circuit_type is "I" or "II". */
mccd_status mccd_circuit_sample(const char *circuit_type, int32_t num_logical_qubits,
                                int32_t depth, uint64_t seed, mccd_circuit_t **out);
mccd_status mccd_circuit_from_text(const char *text, mccd_circuit_t **out);
mccd_status mccd_circuit_to_text(const mccd_circuit_t *circuit, char **out_text);
void mccd_circuit_destroy(mccd_circuit_t *circuit);
int32_t mccd_circuit_num_qubits(const mccd_circuit_t *circuit);
int32_t mccd_circuit_depth(const mccd_circuit_t *circuit);

/* ---- Datasets ------------------------------------------------------------ */

typedef struct {
    int32_t distance;
    char circuit_type;  /* 'I' for Type I, '2' for Type II */
    int32_t num_logical_qubits;
    int32_t depth;
    uint64_t seed;
} mccd_gen_config;

/* Samples `count` mirror circuits + noisy shots under the standard noise
 * model and writes them as one dataset file. */
mccd_status mccd_generate_dataset(const mccd_gen_config *config, uint64_t count,
                                  const char *out_path);
mccd_status mccd_dataset_info(const char *path, int32_t *distance, int32_t *num_qubits,
                              int32_t *depth, uint64_t *count);

/* ---- Training ------------------------------------------------------------ */

typedef struct {
    int32_t distance;
    char circuit_type;
    int32_t num_logical_qubits;
    const int32_t *depths;
    int32_t num_depths;
    int32_t batch_size;
    double learning_rate;
    double aux_weight;
    int64_t num_batches;
    int32_t stage;  /* 1 or 2 */
    uint64_t seed;
    const char *checkpoint_in;  /* NULL unless stage 2 (or warm start) */
    const char *checkpoint_out;
    const char *log_path;       /* NULL = no per-batch log */
    const char *const *data_files;  /* optional dataset-file mode */
    int32_t num_data_files;
    int32_t hidden;  /* 0 = per-distance default */
} mccd_train_config;

typedef struct {
    double first_loss;
    double last_loss;
    int64_t batches;
} mccd_train_stats;

mccd_status mccd_train(const mccd_train_config *config, mccd_train_stats *stats);

/* ---- Evaluation and benchmarking ----------------------------------------- */

typedef struct {
    int32_t distance;
    char circuit_type;
    int32_t num_logical_qubits;
    const int32_t *depths;
    int32_t num_depths;
    int64_t shots_per_depth;
    uint64_t seed;
    const char *decoder;     /* "mccd" or "mle" */
    const char *checkpoint;  /* mccd decoder */
    int32_t mle_max_weight;  /* mle decoder */
} mccd_eval_config;

typedef struct {
    char decoder[8];
    int32_t distance;
    char circuit_type;
    int32_t depth;
    int64_t shots;
    double accuracy;
    double stderr_;
    double mean_walltime_s;
    double majority_rate;
} mccd_report_row;

/* `rows` must hold num_depths entries. The walltime fit outputs are optional
 * (pass NULL); r2 is NaN when fewer than two depths were measured. */
mccd_status mccd_evaluate(const mccd_eval_config *config, mccd_report_row *rows);
mccd_status mccd_benchmark(const mccd_eval_config *config, mccd_report_row *rows,
                           double *slope, double *intercept, double *r2);
mccd_status mccd_report_csv(const mccd_report_row *rows, int32_t num_rows, char **out_text);
mccd_status mccd_report_table(const mccd_report_row *rows, int32_t num_rows, char **out_text);

/* ---- Detector error model / MLE baseline --------------------------------- */

/* Extracts the detector error model of `circuit_text` compiled at the given
 * distance under the standard noise model; returns the canonical text dump. */
mccd_status mccd_dem_text(const char *circuit_text, int32_t distance, char **out_text);

/* Decodes (at most `limit`, or all when limit < 0) records of a dataset with
 * the bounded-weight MLE baseline; fills one summary row. */
mccd_status mccd_mle_decode_dataset(const char *dataset_path, int32_t max_weight, int64_t limit,
                                    mccd_report_row *row);

/* ---- Gradient audit ------------------------------------------------------ */

/* Finite-difference audit of the training gradients on a tiny model covering
 * every module type. Writes the max relative error. */
mccd_status mccd_grad_check(uint64_t seed, double eps, double *max_rel_err);

#ifdef __cplusplus
}
#endif

#endif /* MCCD_MCCD_H_ */
