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

// Evaluation protocol: rank and linear correlation after a five-parameter
// logistic remapping, content-separated repeated train/test trials,
// confusion analysis, cross-database testing and parameter sweeps.

#ifndef ENIQA_EVAL_HPP_
#define ENIQA_EVAL_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eniqa/dataset.hpp"
#include "eniqa/features.hpp"
#include "eniqa/pipeline.hpp"
#include "eniqa/svm.hpp"

namespace eniqa {

// Ranks starting at 1; tied values share the mean of their rank span.
std::vector<double> AverageRanks(std::span<const double> values);
double Pearson(std::span<const double> a, std::span<const double> b);
double Srocc(std::span<const double> a, std::span<const double> b);

struct NelderMeadOptions {
  double diameter_tolerance = 1e-8;
  long max_evaluations = 20000;
  int restarts = 1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  long evaluations = 0;
};

// Initial simplex: x0 plus one vertex per axis displaced by steps[i].
NelderMeadResult NelderMead(const std::function<double(std::span<const double>)>& f,
                            std::vector<double> x0, std::vector<double> steps,
                            const NelderMeadOptions& options = {});

struct LogisticParams {
  std::array<double, 5> beta{};

  // b1 (1/2 - 1 / (1 + exp(b2 (z - b3)))) + b4 z + b5
  double Evaluate(double z) const;
};

struct LogisticFit {
  LogisticParams params;
  double sse = 0.0;
  double initial_sse = 0.0;
  long evaluations = 0;
};

LogisticFit FitLogistic5(std::span<const double> z, std::span<const double> y);

struct CorrelationMetrics {
  double srocc = 0.0;
  double plcc = 0.0;
  double rmse = 0.0;
  LogisticParams logistic;
};

// Logistic fit of z onto y, then Pearson and RMSE of f(z) against y.
CorrelationMetrics PlccRmse(std::span<const double> z, std::span<const double> y);
// SROCC plus PlccRmse.
CorrelationMetrics ComputeMetrics(std::span<const double> z, std::span<const double> y);

// On-disk cache of feature vectors keyed by (image bytes, feature config).
// Entries are written to a temporary file and renamed into place, so
// concurrent readers never see partial entries.
class FeatureCache {
 public:
  explicit FeatureCache(std::string directory);

  static std::string Key(std::span<const std::uint8_t> image_bytes, const FeatureConfig& config);
  std::optional<FeatureVector> Lookup(const std::string& key) const;
  void Store(const std::string& key, const FeatureVector& features) const;

 private:
  std::string directory_;
};

struct ExtractionResult {
  std::vector<FeatureVector> features;   // one per record (zeros where failed)
  std::vector<std::string> errors;       // empty string where succeeded
  double seconds_per_image = 0.0;        // wall clock of uncached extractions
  std::size_t cache_hits = 0;
};

// Extracts features for every manifest record, in record order.
ExtractionResult ExtractManifestFeatures(const DatasetManifest& manifest,
                                         const FeatureConfig& config,
                                         const FeatureCache* cache, int jobs,
                                         bool keep_going);

struct EvalConfig {
  int trials = 1000;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  int jobs = 1;
  ModelKind kind = ModelKind::kFull;
  SvmParams svm;
  FeatureConfig features;
  int max_resamples = 100;

  void Validate() const;
  std::string Describe() const;
};

struct TrialResult {
  int trial = 0;
  int resamples = 0;
  std::size_t test_size = 0;
  CorrelationMetrics overall;
  // NaN entries where a class had too few test images (SROCC needs 3, the
  // logistic fit 5) or the fit was degenerate.
  std::map<std::string, CorrelationMetrics> per_class;
  double accuracy = 0.0;
  std::vector<int> true_class;       // per test image
  std::vector<int> predicted_class;  // per test image
  std::vector<double> predicted_score;
  std::vector<double> subjective_score;
};

struct ConfusionResult {
  Matrix matrix;                        // rows: true class, columns: predicted
  std::vector<double> per_class_accuracy;  // diagonal
  std::vector<int> row_support;            // trials in which the class was tested
  double mean_accuracy = 0.0;              // mean over trials of overall accuracy
};

// Row-normalizes each trial's counts, then averages the rows that occur.
ConfusionResult ConfusionMatrix(const std::vector<TrialResult>& trials, std::size_t classes);

struct MetricMedians {
  double srocc = 0.0;
  double plcc = 0.0;
  double rmse = 0.0;
  int samples = 0;  // trials that produced a finite value
};

struct EvalReport {
  std::string protocol;  // "cross_validate" or "cross_database"
  std::vector<std::string> classes;
  MetricMedians overall;
  std::map<std::string, MetricMedians> per_class;
  int trials = 0;
  int resampled_trials = 0;
  int total_resamples = 0;
  ConfusionResult confusion;
  double median_accuracy = 0.0;
  LogisticParams final_logistic;
  ScorePolarity train_polarity = ScorePolarity::kHigherIsWorse;
  ScorePolarity test_polarity = ScorePolarity::kHigherIsWorse;
  std::string config_echo;
  std::vector<TrialResult> trial_results;

  bool PolarityAligned() const { return train_polarity == test_polarity; }
  void CheckInvariants() const;
};

EvalReport CrossValidate(const DatasetManifest& manifest,
                         const std::vector<FeatureVector>& features, const EvalConfig& config);

EvalReport CrossDatabase(const DatasetManifest& train, const std::vector<FeatureVector>& train_features,
                         const DatasetManifest& test, const std::vector<FeatureVector>& test_features,
                         const std::vector<std::string>& common_labels, const EvalConfig& config);

struct WindowSize {
  int rows;
  int cols;
};

struct SweepRow {
  WindowSize window;
  double srocc = 0.0;
  double seconds_per_image = 0.0;
};

std::vector<WindowSize> DefaultSweepSizes();

std::vector<SweepRow> WindowSweep(const DatasetManifest& manifest,
                                  const std::vector<WindowSize>& sizes, const EvalConfig& config,
                                  const FeatureCache* cache);

struct GridRow {
  double c = 0.0;
  double gamma = 0.0;
  double srocc = 0.0;
  double plcc = 0.0;
  double accuracy = 0.0;
};

std::vector<GridRow> GridSearch(const DatasetManifest& manifest,
                                const std::vector<FeatureVector>& features,
                                const std::vector<double>& costs,
                                const std::vector<double>& gammas, const EvalConfig& config);

std::string FormatReportText(const EvalReport& report);
std::string FormatReportCsv(const EvalReport& report);
std::string FormatTrialsCsv(const EvalReport& report);
std::string FormatConfusionCsv(const EvalReport& report);
std::string FormatSweepCsv(const std::vector<SweepRow>& rows);
std::string FormatGridCsv(const std::vector<GridRow>& rows);

}  // namespace eniqa

#endif  // ENIQA_EVAL_HPP_
