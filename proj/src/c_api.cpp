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

#include "eniqa/eniqa.h"

#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eniqa/dataset.hpp"
#include "eniqa/error.hpp"
#include "eniqa/eval.hpp"
#include "eniqa/features.hpp"
#include "eniqa/image.hpp"
#include "eniqa/numfmt.hpp"
#include "eniqa/pipeline.hpp"
#include "eniqa/selftest.hpp"

struct eniqa_config {
  eniqa::EvalConfig eval;
  std::string cache_dir;
  std::string describe;
};

struct eniqa_image {
  eniqa::RgbImage image;
};

struct eniqa_manifest {
  eniqa::DatasetManifest manifest;
};

struct eniqa_feature_set {
  std::vector<std::string> paths;
  eniqa::ExtractionResult result;
  std::string csv;
};

struct eniqa_model {
  eniqa::EniqaModel model;
};

struct eniqa_report {
  eniqa::EvalReport report;
  std::string text;
};

struct eniqa_table {
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::string csv;
};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

thread_local std::string g_last_error;
thread_local std::string g_selftest_log;

eniqa_status StatusFor(eniqa::ErrorKind kind) {
  switch (kind) {
    case eniqa::ErrorKind::kArgument: return ENIQA_ERR_ARGUMENT;
    case eniqa::ErrorKind::kSize: return ENIQA_ERR_SIZE;
    case eniqa::ErrorKind::kDecode: return ENIQA_ERR_DECODE;
    case eniqa::ErrorKind::kParse: return ENIQA_ERR_PARSE;
    case eniqa::ErrorKind::kTraining: return ENIQA_ERR_TRAINING;
    case eniqa::ErrorKind::kConfig: return ENIQA_ERR_CONFIG;
    case eniqa::ErrorKind::kState: return ENIQA_ERR_STATE;
    case eniqa::ErrorKind::kIo: return ENIQA_ERR_IO;
    case eniqa::ErrorKind::kInternal: return ENIQA_ERR_INTERNAL;
  }
  return ENIQA_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
eniqa_status Guard(Fn&& fn) {
  try {
    fn();
    return ENIQA_OK;
  } catch (const eniqa::Error& e) {
    g_last_error = e.what();
    return StatusFor(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ENIQA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ENIQA_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ENIQA_ERR_INTERNAL;
  }
}

void Require(bool condition, const char* what) {
  if (!condition) eniqa::Fail(eniqa::ErrorKind::kArgument, what);
}

std::optional<eniqa::FeatureCache> MakeCache(const eniqa_config* config) {
  if (config->cache_dir.empty()) return std::nullopt;
  return eniqa::FeatureCache(config->cache_dir);
}

// Features for every manifest row, extracting them when `features` is null.
std::vector<eniqa::FeatureVector> FeaturesFor(const eniqa_config* config,
                                              const eniqa_manifest* manifest,
                                              const eniqa_feature_set* features) {
  if (features == nullptr) {
    const auto cache = MakeCache(config);
    return eniqa::ExtractManifestFeatures(manifest->manifest, config->eval.features,
                                          cache ? &*cache : nullptr, config->eval.jobs, false)
        .features;
  }
  if (features->result.features.size() != manifest->manifest.records.size()) {
    eniqa::Fail(eniqa::ErrorKind::kArgument, "feature set does not match the manifest");
  }
  for (std::size_t i = 0; i < features->result.errors.size(); ++i) {
    if (!features->result.errors[i].empty()) {
      eniqa::Fail(eniqa::ErrorKind::kState,
                  "feature set has a failed row: " + features->result.errors[i]);
    }
  }
  return features->result.features;
}

eniqa::FeatureVector CopyFeatures(const double* values) {
  eniqa::FeatureVector v;
  std::copy(values, values + eniqa::kNumFeatures, v.values.begin());
  return v;
}

void CopyPrediction(const eniqa::Prediction& p, double* score, double* probabilities,
                    double* class_scores) {
  if (score) *score = p.score;
  if (probabilities) std::copy(p.probabilities.begin(), p.probabilities.end(), probabilities);
  if (class_scores) std::copy(p.class_scores.begin(), p.class_scores.end(), class_scores);
}

template <typename Format>
eniqa_status ReportString(eniqa_report* report, const char** out, Format format) {
  return Guard([&] {
    Require(report != nullptr && out != nullptr, "null argument");
    report->text = format(report->report);
    *out = report->text.c_str();
  });
}

}  // namespace

extern "C" {

const char* eniqa_version(void) { return "1.0.0"; }

const char* eniqa_status_name(eniqa_status status) {
  switch (status) {
    case ENIQA_OK: return "ok";
    case ENIQA_ERR_ARGUMENT: return "argument error";
    case ENIQA_ERR_SIZE: return "size error";
    case ENIQA_ERR_DECODE: return "decode error";
    case ENIQA_ERR_PARSE: return "parse error";
    case ENIQA_ERR_TRAINING: return "training error";
    case ENIQA_ERR_CONFIG: return "config error";
    case ENIQA_ERR_STATE: return "state error";
    case ENIQA_ERR_IO: return "io error";
    case ENIQA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* eniqa_last_error(void) { return g_last_error.c_str(); }

// ---- Configuration ---------------------------------------------------------

eniqa_status eniqa_config_create(eniqa_config** out) {
  return Guard([&] {
    Require(out != nullptr, "null output pointer");
    *out = new eniqa_config();
  });
}

void eniqa_config_destroy(eniqa_config* config) { delete config; }

eniqa_status eniqa_config_set_window(eniqa_config* config, int rows, int cols) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    eniqa::FeatureConfig f = config->eval.features;
    f.window_rows = rows;
    f.window_cols = cols;
    f.Validate();
    config->eval.features = f;
  });
}

eniqa_status eniqa_config_set_keep_fraction(eniqa_config* config, double fraction) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    eniqa::FeatureConfig f = config->eval.features;
    f.keep_fraction = fraction;
    f.Validate();
    config->eval.features = f;
  });
}

eniqa_status eniqa_config_set_log_gabor(eniqa_config* config, double freq_high, double freq_low,
                                        double sigma_ratio, double sigma_theta) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    eniqa::FeatureConfig f = config->eval.features;
    f.log_gabor.center_freqs = {freq_high, freq_low};
    f.log_gabor.sigma_ratio = sigma_ratio;
    f.log_gabor.sigma_theta = sigma_theta;
    f.Validate();
    config->eval.features = f;
  });
}

eniqa_status eniqa_config_set_svm(eniqa_config* config, double c, double gamma, double epsilon) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    eniqa::SvmParams p = config->eval.svm;
    p.c = c;
    p.gamma = gamma;
    p.epsilon = epsilon;
    p.Validate();
    config->eval.svm = p;
  });
}

eniqa_status eniqa_config_set_trials(eniqa_config* config, int trials) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    if (trials < 1) eniqa::Fail(eniqa::ErrorKind::kConfig, "trials must be >= 1");
    config->eval.trials = trials;
  });
}

eniqa_status eniqa_config_set_train_fraction(eniqa_config* config, double fraction) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    if (!(fraction > 0.0 && fraction < 1.0)) {
      eniqa::Fail(eniqa::ErrorKind::kConfig, "train fraction must lie in (0, 1)");
    }
    config->eval.train_fraction = fraction;
  });
}

eniqa_status eniqa_config_set_seed(eniqa_config* config, uint64_t seed) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    config->eval.seed = seed;
  });
}

eniqa_status eniqa_config_set_model_kind(eniqa_config* config, const char* kind) {
  return Guard([&] {
    Require(config != nullptr && kind != nullptr, "null argument");
    config->eval.kind = eniqa::ParseModelKind(kind);
  });
}

eniqa_status eniqa_config_set_jobs(eniqa_config* config, int jobs) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    if (jobs < 1) eniqa::Fail(eniqa::ErrorKind::kConfig, "jobs must be >= 1");
    config->eval.jobs = jobs;
  });
}

eniqa_status eniqa_config_set_cache_dir(eniqa_config* config, const char* dir) {
  return Guard([&] {
    Require(config != nullptr, "null config");
    config->cache_dir = dir ? dir : "";
  });
}

eniqa_status eniqa_config_describe(eniqa_config* config, const char** text) {
  return Guard([&] {
    Require(config != nullptr && text != nullptr, "null argument");
    config->describe = config->eval.Describe();
    *text = config->describe.c_str();
  });
}

// ---- Images ----------------------------------------------------------------

eniqa_status eniqa_image_load(const char* path, eniqa_image** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto image = std::make_unique<eniqa_image>();
    image->image = eniqa::LoadImage(path);
    *out = image.release();
  });
}

eniqa_status eniqa_image_decode(const uint8_t* bytes, size_t size, eniqa_image** out) {
  return Guard([&] {
    Require((bytes != nullptr || size == 0) && out != nullptr, "null argument");
    auto image = std::make_unique<eniqa_image>();
    image->image = eniqa::DecodeImage(std::span<const std::uint8_t>(bytes, size));
    *out = image.release();
  });
}

void eniqa_image_destroy(eniqa_image* image) { delete image; }

eniqa_status eniqa_image_size(const eniqa_image* image, int* width, int* height) {
  return Guard([&] {
    Require(image != nullptr, "null image");
    if (width) *width = image->image.width;
    if (height) *height = image->image.height;
  });
}

eniqa_status eniqa_extract_features(const eniqa_config* config, const eniqa_image* image,
                                    double* features) {
  return Guard([&] {
    Require(config != nullptr && image != nullptr && features != nullptr, "null argument");
    const eniqa::FeatureVector v = eniqa::ExtractFeatures(image->image, config->eval.features);
    std::copy(v.values.begin(), v.values.end(), features);
  });
}

// ---- Manifests -------------------------------------------------------------

eniqa_status eniqa_manifest_load(const char* path, eniqa_manifest** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto manifest = std::make_unique<eniqa_manifest>();
    manifest->manifest = eniqa::ParseManifest(path);
    *out = manifest.release();
  });
}

eniqa_status eniqa_manifest_from_paths(const char* const* paths, size_t count,
                                       eniqa_manifest** out) {
  return Guard([&] {
    Require((paths != nullptr || count == 0) && out != nullptr, "null argument");
    auto manifest = std::make_unique<eniqa_manifest>();
    for (size_t i = 0; i < count; ++i) {
      Require(paths[i] != nullptr, "null path");
      eniqa::ManifestRecord record;
      record.image_path = paths[i];
      record.reference_id = paths[i];
      manifest->manifest.records.push_back(std::move(record));
    }
    *out = manifest.release();
  });
}

void eniqa_manifest_destroy(eniqa_manifest* manifest) { delete manifest; }

size_t eniqa_manifest_size(const eniqa_manifest* manifest) {
  return manifest ? manifest->manifest.records.size() : 0;
}

const char* eniqa_manifest_path(const eniqa_manifest* manifest, size_t index) {
  if (!manifest || index >= manifest->manifest.records.size()) return nullptr;
  return manifest->manifest.records[index].image_path.c_str();
}

const char* eniqa_manifest_label(const eniqa_manifest* manifest, size_t index) {
  if (!manifest || index >= manifest->manifest.records.size()) return nullptr;
  return manifest->manifest.records[index].label.c_str();
}

const char* eniqa_manifest_polarity(const eniqa_manifest* manifest) {
  return manifest ? eniqa::PolarityName(manifest->manifest.polarity) : nullptr;
}

// ---- Feature sets ----------------------------------------------------------

eniqa_status eniqa_feature_set_extract(const eniqa_config* config,
                                       const eniqa_manifest* manifest, int keep_going,
                                       eniqa_feature_set** out) {
  return Guard([&] {
    Require(config != nullptr && manifest != nullptr && out != nullptr, "null argument");
    auto set = std::make_unique<eniqa_feature_set>();
    const auto cache = MakeCache(config);
    set->result = eniqa::ExtractManifestFeatures(manifest->manifest, config->eval.features,
                                                 cache ? &*cache : nullptr, config->eval.jobs,
                                                 keep_going != 0);
    for (const auto& r : manifest->manifest.records) set->paths.push_back(r.image_path);
    *out = set.release();
  });
}

void eniqa_feature_set_destroy(eniqa_feature_set* set) { delete set; }

size_t eniqa_feature_set_size(const eniqa_feature_set* set) {
  return set ? set->result.features.size() : 0;
}

size_t eniqa_feature_set_failures(const eniqa_feature_set* set) {
  if (!set) return 0;
  size_t n = 0;
  for (const auto& e : set->result.errors) n += e.empty() ? 0 : 1;
  return n;
}

const char* eniqa_feature_set_error(const eniqa_feature_set* set, size_t index) {
  if (!set || index >= set->result.errors.size()) return nullptr;
  return set->result.errors[index].c_str();
}

eniqa_status eniqa_feature_set_row(const eniqa_feature_set* set, size_t index,
                                   double* features) {
  return Guard([&] {
    Require(set != nullptr && features != nullptr, "null argument");
    Require(index < set->result.features.size(), "row index out of range");
    if (!set->result.errors[index].empty()) {
      eniqa::Fail(eniqa::ErrorKind::kState, "row failed: " + set->result.errors[index]);
    }
    const auto& v = set->result.features[index].values;
    std::copy(v.begin(), v.end(), features);
  });
}

double eniqa_feature_set_seconds_per_image(const eniqa_feature_set* set) {
  return set ? set->result.seconds_per_image : kNaN;
}

eniqa_status eniqa_feature_set_csv(eniqa_feature_set* set, const char** csv) {
  return Guard([&] {
    Require(set != nullptr && csv != nullptr, "null argument");
    std::ostringstream out;
    eniqa::WriteFeatureCsvHeader(out);
    for (size_t i = 0; i < set->paths.size(); ++i) {
      if (!set->result.errors[i].empty()) continue;
      eniqa::WriteFeatureCsvRow(out, set->paths[i], set->result.features[i]);
    }
    set->csv = out.str();
    *csv = set->csv.c_str();
  });
}

// ---- Models ----------------------------------------------------------------

eniqa_status eniqa_model_train(const eniqa_config* config, const eniqa_manifest* manifest,
                               const eniqa_feature_set* features, eniqa_model** out) {
  return Guard([&] {
    Require(config != nullptr && manifest != nullptr && out != nullptr, "null argument");
    const auto vectors = FeaturesFor(config, manifest, features);
    std::vector<eniqa::TrainingSample> samples;
    for (size_t i = 0; i < vectors.size(); ++i) {
      const auto& r = manifest->manifest.records[i];
      samples.push_back({vectors[i], r.label, r.score});
    }
    eniqa::PipelineParams params;
    params.features = config->eval.features;
    params.svm = config->eval.svm;
    params.kind = config->eval.kind;
    params.seed = config->eval.seed;
    auto model = std::make_unique<eniqa_model>();
    model->model = eniqa::TrainEniqa(samples, params);
    *out = model.release();
  });
}

eniqa_status eniqa_model_load(const char* path, eniqa_model** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto model = std::make_unique<eniqa_model>();
    model->model = eniqa::LoadModel(path);
    *out = model.release();
  });
}

eniqa_status eniqa_model_save(const eniqa_model* model, const char* path) {
  return Guard([&] {
    Require(model != nullptr && path != nullptr, "null argument");
    eniqa::SaveModel(model->model, path);
  });
}

void eniqa_model_destroy(eniqa_model* model) { delete model; }

eniqa_status eniqa_model_config(const eniqa_model* model, eniqa_config** out) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    auto config = std::make_unique<eniqa_config>();
    config->eval.features = model->model.feature_config;
    config->eval.svm = model->model.svm;
    config->eval.kind = model->model.kind;
    config->eval.seed = model->model.seed;
    *out = config.release();
  });
}

size_t eniqa_model_class_count(const eniqa_model* model) {
  return model ? model->model.classes().size() : 0;
}

const char* eniqa_model_class_name(const eniqa_model* model, size_t index) {
  if (!model || index >= model->model.classes().size()) return nullptr;
  return model->model.classes()[index].c_str();
}

eniqa_status eniqa_model_predict(const eniqa_model* model, const eniqa_image* image,
                                 double* score, double* probabilities, double* class_scores) {
  return Guard([&] {
    Require(model != nullptr && image != nullptr, "null argument");
    CopyPrediction(eniqa::PredictScore(model->model, image->image), score, probabilities,
                   class_scores);
  });
}

eniqa_status eniqa_model_predict_features(const eniqa_model* model, const double* features,
                                          double* score, double* probabilities,
                                          double* class_scores) {
  return Guard([&] {
    Require(model != nullptr && features != nullptr, "null argument");
    CopyPrediction(eniqa::PredictFromFeatures(model->model, CopyFeatures(features)), score,
                   probabilities, class_scores);
  });
}

eniqa_status eniqa_model_predict_csv(const eniqa_model* model,
                                     const eniqa_feature_set* features, eniqa_table** out) {
  return Guard([&] {
    Require(model != nullptr && features != nullptr && out != nullptr, "null argument");
    const auto& classes = model->model.classes();
    auto table = std::make_unique<eniqa_table>();
    table->cols = 1 + 2 * classes.size();
    std::ostringstream csv;
    csv << "path,score";
    for (const auto& c : classes) csv << ",p_" << c;
    for (const auto& c : classes) csv << ",q_" << c;
    csv << "\n";
    for (size_t i = 0; i < features->paths.size(); ++i) {
      if (!features->result.errors[i].empty()) continue;
      const eniqa::Prediction p =
          eniqa::PredictFromFeatures(model->model, features->result.features[i]);
      csv << features->paths[i] << ',' << eniqa::FormatDouble(p.score);
      table->values.push_back(p.score);
      for (const double v : p.probabilities) {
        csv << ',' << eniqa::FormatDouble(v);
        table->values.push_back(v);
      }
      for (const double v : p.class_scores) {
        csv << ',' << eniqa::FormatDouble(v);
        table->values.push_back(v);
      }
      csv << "\n";
    }
    table->csv = csv.str();
    *out = table.release();
  });
}

// ---- Evaluation ------------------------------------------------------------

eniqa_status eniqa_evaluate_cv(const eniqa_config* config, const eniqa_manifest* manifest,
                               const eniqa_feature_set* features, eniqa_report** out) {
  return Guard([&] {
    Require(config != nullptr && manifest != nullptr && out != nullptr, "null argument");
    const auto vectors = FeaturesFor(config, manifest, features);
    auto report = std::make_unique<eniqa_report>();
    report->report = eniqa::CrossValidate(manifest->manifest, vectors, config->eval);
    *out = report.release();
  });
}

eniqa_status eniqa_evaluate_cross_db(const eniqa_config* config, const eniqa_manifest* train,
                                     const eniqa_feature_set* train_features,
                                     const eniqa_manifest* test,
                                     const eniqa_feature_set* test_features,
                                     const char* const* labels, size_t label_count,
                                     eniqa_report** out) {
  return Guard([&] {
    Require(config != nullptr && train != nullptr && test != nullptr && out != nullptr,
            "null argument");
    Require(labels != nullptr || label_count == 0, "null label list");
    std::vector<std::string> common;
    for (size_t i = 0; i < label_count; ++i) {
      Require(labels[i] != nullptr, "null label");
      common.emplace_back(labels[i]);
    }
    const auto train_vectors = FeaturesFor(config, train, train_features);
    const auto test_vectors = FeaturesFor(config, test, test_features);
    auto report = std::make_unique<eniqa_report>();
    report->report = eniqa::CrossDatabase(train->manifest, train_vectors, test->manifest,
                                          test_vectors, common, config->eval);
    *out = report.release();
  });
}

void eniqa_report_destroy(eniqa_report* report) { delete report; }

double eniqa_report_srocc(const eniqa_report* report) {
  return report ? report->report.overall.srocc : kNaN;
}

double eniqa_report_plcc(const eniqa_report* report) {
  return report ? report->report.overall.plcc : kNaN;
}

double eniqa_report_rmse(const eniqa_report* report) {
  return report ? report->report.overall.rmse : kNaN;
}

double eniqa_report_accuracy(const eniqa_report* report) {
  return report ? report->report.median_accuracy : kNaN;
}

double eniqa_report_class_srocc(const eniqa_report* report, const char* label) {
  if (!report || !label) return kNaN;
  const auto it = report->report.per_class.find(label);
  return it == report->report.per_class.end() ? kNaN : it->second.srocc;
}

eniqa_status eniqa_report_text(eniqa_report* report, const char** text) {
  return ReportString(report, text, eniqa::FormatReportText);
}

eniqa_status eniqa_report_csv(eniqa_report* report, const char** csv) {
  return ReportString(report, csv, eniqa::FormatReportCsv);
}

eniqa_status eniqa_report_trials_csv(eniqa_report* report, const char** csv) {
  return ReportString(report, csv, eniqa::FormatTrialsCsv);
}

eniqa_status eniqa_report_confusion_csv(eniqa_report* report, const char** csv) {
  return ReportString(report, csv, eniqa::FormatConfusionCsv);
}

eniqa_status eniqa_window_sweep(const eniqa_config* config, const eniqa_manifest* manifest,
                                const int* rows, const int* cols, size_t count,
                                eniqa_table** out) {
  return Guard([&] {
    Require(config != nullptr && manifest != nullptr && out != nullptr, "null argument");
    Require((rows != nullptr && cols != nullptr) || count == 0, "null size list");
    std::vector<eniqa::WindowSize> sizes;
    for (size_t i = 0; i < count; ++i) sizes.push_back({rows[i], cols[i]});
    if (sizes.empty()) sizes = eniqa::DefaultSweepSizes();
    const auto cache = MakeCache(config);
    const auto result =
        eniqa::WindowSweep(manifest->manifest, sizes, config->eval, cache ? &*cache : nullptr);
    auto table = std::make_unique<eniqa_table>();
    table->cols = 4;
    for (const auto& r : result) {
      table->values.insert(table->values.end(),
                           {static_cast<double>(r.window.rows), static_cast<double>(r.window.cols),
                            r.srocc, r.seconds_per_image});
    }
    table->csv = eniqa::FormatSweepCsv(result);
    *out = table.release();
  });
}

eniqa_status eniqa_grid_search(const eniqa_config* config, const eniqa_manifest* manifest,
                               const eniqa_feature_set* features, const double* costs,
                               size_t cost_count, const double* gammas, size_t gamma_count,
                               eniqa_table** out) {
  return Guard([&] {
    Require(config != nullptr && manifest != nullptr && out != nullptr, "null argument");
    Require(costs != nullptr && gammas != nullptr && cost_count > 0 && gamma_count > 0,
            "empty parameter grid");
    const auto vectors = FeaturesFor(config, manifest, features);
    const auto result = eniqa::GridSearch(manifest->manifest, vectors,
                                          std::vector<double>(costs, costs + cost_count),
                                          std::vector<double>(gammas, gammas + gamma_count),
                                          config->eval);
    auto table = std::make_unique<eniqa_table>();
    table->cols = 5;
    for (const auto& r : result) {
      table->values.insert(table->values.end(), {r.c, r.gamma, r.srocc, r.plcc, r.accuracy});
    }
    table->csv = eniqa::FormatGridCsv(result);
    *out = table.release();
  });
}

// ---- Tables ----------------------------------------------------------------

void eniqa_table_destroy(eniqa_table* table) { delete table; }

size_t eniqa_table_rows(const eniqa_table* table) {
  return table && table->cols ? table->values.size() / table->cols : 0;
}

size_t eniqa_table_cols(const eniqa_table* table) { return table ? table->cols : 0; }

double eniqa_table_value(const eniqa_table* table, size_t row, size_t col) {
  if (!table || col >= table->cols || row >= eniqa_table_rows(table)) return kNaN;
  return table->values[row * table->cols + col];
}

const char* eniqa_table_csv(const eniqa_table* table) {
  return table ? table->csv.c_str() : nullptr;
}

// ---- Self test -------------------------------------------------------------

eniqa_status eniqa_selftest(int* failures, const char** log) {
  return Guard([&] {
    Require(failures != nullptr, "null argument");
    const auto checks = eniqa::RunSelftest();
    std::ostringstream out;
    int failed = 0;
    for (const auto& c : checks) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
      failed += c.passed ? 0 : 1;
    }
    g_selftest_log = out.str();
    *failures = failed;
    if (log) *log = g_selftest_log.c_str();
  });
}

}  // extern "C"
