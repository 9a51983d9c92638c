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

// Two-stage quality model: a probabilistic distortion classifier and one
// regressor per distortion; the score is sum_d p_d * q_d.

#ifndef ENIQA_PIPELINE_HPP_
#define ENIQA_PIPELINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "eniqa/features.hpp"
#include "eniqa/svm.hpp"

namespace eniqa {

struct TrainingSample {
  FeatureVector features;
  std::string label;
  double score = 0.0;
};

struct PipelineParams {
  FeatureConfig features;
  SvmParams svm;
  ModelKind kind = ModelKind::kFull;
  std::uint64_t seed = 0;
};

struct EniqaModel {
  FeatureConfig feature_config;
  SvmParams svm;
  ModelKind kind = ModelKind::kFull;
  std::uint64_t seed = 0;
  ScaleParams scaler;
  SvcModel classifier;
  std::map<std::string, SvrModel> regressors;

  const std::vector<std::string>& classes() const { return classifier.classes; }
  void Validate() const;
};

struct Prediction {
  double score = 0.0;
  std::vector<double> probabilities;  // model class order
  std::vector<double> class_scores;   // q_d, model class order
  int predicted_class = 0;            // argmax of probabilities
};

EniqaModel TrainEniqa(std::span<const TrainingSample> samples, const PipelineParams& params);

Prediction PredictFromFeatures(const EniqaModel& model, const FeatureVector& features);

// Extracts with the model's own feature configuration.
Prediction PredictScore(const EniqaModel& model, const RgbImage& img);
// Rejects extraction configs that differ from the one the model was trained on.
Prediction PredictScore(const EniqaModel& model, const RgbImage& img,
                        const FeatureConfig& extraction);

// Text model file: "ENIQA-MODEL v1", then [config] [scaler] [svc] [svr:<label>]...
void WriteModel(std::ostream& out, const EniqaModel& model);
EniqaModel ReadModel(std::istream& in);
std::string SerializeModel(const EniqaModel& model);
EniqaModel DeserializeModel(const std::string& text);
void SaveModel(const EniqaModel& model, const std::string& path);
EniqaModel LoadModel(const std::string& path);

}  // namespace eniqa

#endif  // ENIQA_PIPELINE_HPP_
