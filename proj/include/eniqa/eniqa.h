// Copyright 2026 The ENIQA Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the ENIQA library.
 *
 * All objects are opaque handles created by `*_create`/`*_load`/... and
 * released with the matching `*_destroy`. Every fallible call returns an
 * eniqa_status; on failure eniqa_last_error() describes the problem (the
 * message is thread-local and valid until the next failing call on the same
 * thread). Strings returned through `const char**` out-parameters are owned
 * by the handle they were read from and stay valid until it is destroyed or
 * the same accessor is called again. */

#ifndef ENIQA_ENIQA_H_
#define ENIQA_ENIQA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ENIQA_BUILDING_LIBRARY)
#define ENIQA_API __declspec(dllexport)
#else
#define ENIQA_API __declspec(dllimport)
#endif
#else
#define ENIQA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define ENIQA_NUM_FEATURES 56

typedef enum eniqa_status {
  ENIQA_OK = 0,
  ENIQA_ERR_ARGUMENT = 1, /* invalid argument or null handle */
  ENIQA_ERR_SIZE = 2,     /* image too small for the operation */
  ENIQA_ERR_DECODE = 3,   /* unreadable or unsupported image data */
  ENIQA_ERR_PARSE = 4,    /* malformed manifest or model file */
  ENIQA_ERR_TRAINING = 5, /* degenerate training data */
  ENIQA_ERR_CONFIG = 6,   /* inconsistent configuration */
  ENIQA_ERR_STATE = 7,    /* object used in the wrong state */
  ENIQA_ERR_IO = 8,       /* file system failure */
  ENIQA_ERR_INTERNAL = 9  /* broken internal invariant */
} eniqa_status;

typedef struct eniqa_config eniqa_config;
typedef struct eniqa_image eniqa_image;
typedef struct eniqa_manifest eniqa_manifest;
typedef struct eniqa_feature_set eniqa_feature_set;
typedef struct eniqa_model eniqa_model;
typedef struct eniqa_report eniqa_report;
typedef struct eniqa_table eniqa_table;

ENIQA_API const char* eniqa_version(void);
ENIQA_API const char* eniqa_status_name(eniqa_status status);
ENIQA_API const char* eniqa_last_error(void);

/* ---- Configuration -------------------------------------------------------
 * Defaults: window 8x8, keep fraction 0.8, center frequencies 1/3 and 1/6,
 * sigma ratio 0.55, angular sigma pi/6, C = 1e-4, gamma = 1e-4,
 * epsilon = 0.1, 1000 trials, train fraction 0.8, seed 0, model kind "full",
 * 1 job, no feature cache. */
ENIQA_API eniqa_status eniqa_config_create(eniqa_config** out);
ENIQA_API void eniqa_config_destroy(eniqa_config* config);
ENIQA_API eniqa_status eniqa_config_set_window(eniqa_config* config, int rows, int cols);
ENIQA_API eniqa_status eniqa_config_set_keep_fraction(eniqa_config* config, double fraction);
ENIQA_API eniqa_status eniqa_config_set_log_gabor(eniqa_config* config, double freq_high,
                                                  double freq_low, double sigma_ratio,
                                                  double sigma_theta);
ENIQA_API eniqa_status eniqa_config_set_svm(eniqa_config* config, double c, double gamma,
                                            double epsilon);
ENIQA_API eniqa_status eniqa_config_set_trials(eniqa_config* config, int trials);
ENIQA_API eniqa_status eniqa_config_set_train_fraction(eniqa_config* config, double fraction);
ENIQA_API eniqa_status eniqa_config_set_seed(eniqa_config* config, uint64_t seed);
ENIQA_API eniqa_status eniqa_config_set_model_kind(eniqa_config* config, const char* kind);
ENIQA_API eniqa_status eniqa_config_set_jobs(eniqa_config* config, int jobs);
/* Directory for the on-disk feature cache; NULL or "" disables caching. */
ENIQA_API eniqa_status eniqa_config_set_cache_dir(eniqa_config* config, const char* dir);
ENIQA_API eniqa_status eniqa_config_describe(eniqa_config* config, const char** text);

/* ---- Images ---------------------------------------------------------------
 * 24-bit BMP, binary PPM (P6) and binary PGM (P5). */
ENIQA_API eniqa_status eniqa_image_load(const char* path, eniqa_image** out);
ENIQA_API eniqa_status eniqa_image_decode(const uint8_t* bytes, size_t size, eniqa_image** out);
ENIQA_API void eniqa_image_destroy(eniqa_image* image);
ENIQA_API eniqa_status eniqa_image_size(const eniqa_image* image, int* width, int* height);

/* Writes ENIQA_NUM_FEATURES values into `features`. */
ENIQA_API eniqa_status eniqa_extract_features(const eniqa_config* config,
                                              const eniqa_image* image, double* features);

/* ---- Manifests ----------------------------------------------------------- */
ENIQA_API eniqa_status eniqa_manifest_load(const char* path, eniqa_manifest** out);
/* Builds an unlabeled manifest from image paths (for feature extraction). */
ENIQA_API eniqa_status eniqa_manifest_from_paths(const char* const* paths, size_t count,
                                                 eniqa_manifest** out);
ENIQA_API void eniqa_manifest_destroy(eniqa_manifest* manifest);
ENIQA_API size_t eniqa_manifest_size(const eniqa_manifest* manifest);
ENIQA_API const char* eniqa_manifest_path(const eniqa_manifest* manifest, size_t index);
ENIQA_API const char* eniqa_manifest_label(const eniqa_manifest* manifest, size_t index);
/* "DMOS" (higher is worse) or "MOS" (higher is better). */
ENIQA_API const char* eniqa_manifest_polarity(const eniqa_manifest* manifest);

/* ---- Feature sets ---------------------------------------------------------
 * Features for every manifest row, in row order. With keep_going != 0 rows
 * that fail are recorded (see eniqa_feature_set_error) instead of aborting. */
ENIQA_API eniqa_status eniqa_feature_set_extract(const eniqa_config* config,
                                                 const eniqa_manifest* manifest, int keep_going,
                                                 eniqa_feature_set** out);
ENIQA_API void eniqa_feature_set_destroy(eniqa_feature_set* set);
ENIQA_API size_t eniqa_feature_set_size(const eniqa_feature_set* set);
ENIQA_API size_t eniqa_feature_set_failures(const eniqa_feature_set* set);
/* Empty string when the row succeeded. */
ENIQA_API const char* eniqa_feature_set_error(const eniqa_feature_set* set, size_t index);
ENIQA_API eniqa_status eniqa_feature_set_row(const eniqa_feature_set* set, size_t index,
                                             double* features);
ENIQA_API double eniqa_feature_set_seconds_per_image(const eniqa_feature_set* set);
/* CSV with header path,f1..f56; failed rows are omitted. */
ENIQA_API eniqa_status eniqa_feature_set_csv(eniqa_feature_set* set, const char** csv);

/* ---- Models ---------------------------------------------------------------
 * `features` may be NULL, in which case features are extracted on the fly.
 * Every manifest row must have features. */
ENIQA_API eniqa_status eniqa_model_train(const eniqa_config* config,
                                         const eniqa_manifest* manifest,
                                         const eniqa_feature_set* features, eniqa_model** out);
ENIQA_API eniqa_status eniqa_model_load(const char* path, eniqa_model** out);
ENIQA_API eniqa_status eniqa_model_save(const eniqa_model* model, const char* path);
ENIQA_API void eniqa_model_destroy(eniqa_model* model);
/* A config whose feature and SVM settings match those the model was trained
 * with; other settings are defaults. */
ENIQA_API eniqa_status eniqa_model_config(const eniqa_model* model, eniqa_config** out);
ENIQA_API size_t eniqa_model_class_count(const eniqa_model* model);
ENIQA_API const char* eniqa_model_class_name(const eniqa_model* model, size_t index);
/* Predicts one image. `probabilities` and `class_scores` (either may be NULL)
 * receive eniqa_model_class_count() values in class order. */
ENIQA_API eniqa_status eniqa_model_predict(const eniqa_model* model, const eniqa_image* image,
                                           double* score, double* probabilities,
                                           double* class_scores);
ENIQA_API eniqa_status eniqa_model_predict_features(const eniqa_model* model,
                                                    const double* features, double* score,
                                                    double* probabilities, double* class_scores);
/* Predicts every row of a feature set; CSV columns path,score,p_<class>...,
 * q_<class>.... Failed rows are omitted. */
ENIQA_API eniqa_status eniqa_model_predict_csv(const eniqa_model* model,
                                               const eniqa_feature_set* features,
                                               eniqa_table** out);

/* ---- Evaluation ---------------------------------------------------------- */
ENIQA_API eniqa_status eniqa_evaluate_cv(const eniqa_config* config,
                                         const eniqa_manifest* manifest,
                                         const eniqa_feature_set* features, eniqa_report** out);
/* Trains on all of `train`, tests on rows of `test` whose label is one of
 * `labels` (every label must occur in both manifests). */
ENIQA_API eniqa_status eniqa_evaluate_cross_db(const eniqa_config* config,
                                               const eniqa_manifest* train,
                                               const eniqa_feature_set* train_features,
                                               const eniqa_manifest* test,
                                               const eniqa_feature_set* test_features,
                                               const char* const* labels, size_t label_count,
                                               eniqa_report** out);
ENIQA_API void eniqa_report_destroy(eniqa_report* report);
ENIQA_API double eniqa_report_srocc(const eniqa_report* report);
ENIQA_API double eniqa_report_plcc(const eniqa_report* report);
ENIQA_API double eniqa_report_rmse(const eniqa_report* report);
ENIQA_API double eniqa_report_accuracy(const eniqa_report* report);
/* Median SROCC for one class; NaN when the class has no finite values. */
ENIQA_API double eniqa_report_class_srocc(const eniqa_report* report, const char* label);
ENIQA_API eniqa_status eniqa_report_text(eniqa_report* report, const char** text);
ENIQA_API eniqa_status eniqa_report_csv(eniqa_report* report, const char** csv);
ENIQA_API eniqa_status eniqa_report_trials_csv(eniqa_report* report, const char** csv);
ENIQA_API eniqa_status eniqa_report_confusion_csv(eniqa_report* report, const char** csv);

/* Re-extracts features for each window size and cross-validates. Table
 * columns: rows, cols, srocc, seconds_per_image. */
ENIQA_API eniqa_status eniqa_window_sweep(const eniqa_config* config,
                                          const eniqa_manifest* manifest, const int* rows,
                                          const int* cols, size_t count, eniqa_table** out);
/* Cross-validates every (C, gamma) pair. Table columns: c, gamma, srocc,
 * plcc, accuracy. */
ENIQA_API eniqa_status eniqa_grid_search(const eniqa_config* config,
                                         const eniqa_manifest* manifest,
                                         const eniqa_feature_set* features, const double* costs,
                                         size_t cost_count, const double* gammas,
                                         size_t gamma_count, eniqa_table** out);

/* ---- Tables ---------------------------------------------------------------
 * Numeric result tables; the CSV text includes a header row. */
ENIQA_API void eniqa_table_destroy(eniqa_table* table);
ENIQA_API size_t eniqa_table_rows(const eniqa_table* table);
ENIQA_API size_t eniqa_table_cols(const eniqa_table* table);
ENIQA_API double eniqa_table_value(const eniqa_table* table, size_t row, size_t col);
ENIQA_API const char* eniqa_table_csv(const eniqa_table* table);

/* ---- Self test ------------------------------------------------------------
 * Runs dataset-free invariant checks. `failures` receives the number of
 * failed checks; `log` (may be NULL) receives one line per check, valid until
 * the next call on the same thread. */
ENIQA_API eniqa_status eniqa_selftest(int* failures, const char** log);

#ifdef __cplusplus
}
#endif

#endif /* ENIQA_ENIQA_H_ */
