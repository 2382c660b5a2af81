/* Copyright 2026 The Glassbox Authors. All Rights Reserved.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the glassbox shared library.
 *
 * Every function returns a status code (GBX_OK on success); the thread-local
 * message behind gbx_last_error() describes the most recent failure on the
 * calling thread. Handles are opaque and must be released with their _free
 * function. The status codes double as the CLI process exit codes.
 */

#ifndef GLASSBOX_C_API_H
#define GLASSBOX_C_API_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define GBX_OK 0
#define GBX_ERR_VALIDATION 2 /* bad arguments or configuration */
#define GBX_ERR_DATA 3       /* unreadable or malformed input data */
#define GBX_ERR_INTERNAL 4   /* internal invariant breach */

const char* gbx_version(void);

/* Message for the last failing call on this thread; empty string if none. */
const char* gbx_last_error(void);

/* Runs one pipeline command ("synth", "ingest", "stats", "cluster", "train",
 * "bench", "explain", "plot") with a JSON configuration document. Artifacts
 * and a resolved-config snapshot are written into the configured out_dir. */
int gbx_run_command(const char* command, const char* config_json);

/* ---- frames ---- */

typedef struct gbx_frame gbx_frame;

int gbx_frame_load(const char* csv_path, const char* schema_path, gbx_frame** out);
int gbx_frame_rows(const gbx_frame* frame, int64_t* out);
int gbx_frame_features(const gbx_frame* frame, int64_t* out);
/* Copies row r (feature values only) into out[0..features-1]. */
int gbx_frame_row(const gbx_frame* frame, int64_t r, double* out, int64_t out_len);
void gbx_frame_free(gbx_frame* frame);

/* ---- boosted-tree models ---- */

typedef struct gbx_model gbx_model;

int gbx_model_load(const char* path, gbx_model** out);
int gbx_model_features(const gbx_model* model, int64_t* out);
/* 1 for regression; the class count for softmax models. */
int gbx_model_outputs(const gbx_model* model, int64_t* out);
/* Regression: out[0] = prediction. Softmax: out[0..K-1] = probabilities. */
int gbx_model_predict(const gbx_model* model, const double* row, int64_t row_len, double* out,
                      int64_t out_len);
/* Margin-space attributions for one output class: phi[0..features-1], plus
 * the base value and the margin. base + sum(phi) equals margin. */
int gbx_model_explain(const gbx_model* model, const double* row, int64_t row_len,
                      int64_t class_id, double* phi, int64_t phi_len, double* base,
                      double* margin);
void gbx_model_free(gbx_model* model);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GLASSBOX_C_API_H */
