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

#include "eniqa/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "eniqa/error.hpp"
#include "eniqa/numfmt.hpp"

namespace eniqa {

void EniqaModel::Validate() const {
  const std::set<std::string> class_set(classifier.classes.begin(), classifier.classes.end());
  std::set<std::string> regressor_set;
  for (const auto& [label, svr] : regressors) {
    regressor_set.insert(label);
    if (svr.dims != classifier.dims) Fail(ErrorKind::kParse, "regressor dimension mismatch");
  }
  if (class_set != regressor_set) {
    Fail(ErrorKind::kParse, "regressor labels differ from classifier classes");
  }
  if (static_cast<int>(scaler.dims()) != SubsetRange(kind).length ||
      classifier.dims != SubsetRange(kind).length) {
    Fail(ErrorKind::kParse, "model dimensions do not match model kind " +
                                std::string(ModelKindName(kind)));
  }
}

EniqaModel TrainEniqa(std::span<const TrainingSample> samples, const PipelineParams& params) {
  params.svm.Validate();
  if (samples.empty()) Fail(ErrorKind::kTraining, "no training samples");
  std::map<std::string, std::size_t> counts;
  for (const auto& s : samples) ++counts[s.label];
  for (const auto& [label, n] : counts) {
    if (n < 2) Fail(ErrorKind::kTraining, "class '" + label + "' has fewer than 2 samples");
  }
  if (counts.size() < 2) {
    Fail(ErrorKind::kTraining, "training needs at least 2 distortion classes");
  }

  EniqaModel model;
  model.feature_config = params.features;
  model.svm = params.svm;
  model.kind = params.kind;
  model.seed = params.seed;

  Matrix raw;
  raw.reserve(samples.size());
  for (const auto& s : samples) raw.push_back(FeatureSubset(s.features, params.kind));
  model.scaler = FitScaler(raw);
  Matrix scaled;
  std::vector<std::string> labels;
  scaled.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    scaled.push_back(ApplyScaler(model.scaler, raw[i]));
    labels.push_back(samples[i].label);
  }
  model.classifier = TrainSvc(scaled, labels, params.svm, params.seed);
  for (const auto& label : model.classifier.classes) {
    Matrix x;
    std::vector<double> y;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      if (labels[i] != label) continue;
      x.push_back(scaled[i]);
      y.push_back(samples[i].score);
    }
    model.regressors.emplace(label, TrainSvr(x, y, params.svm));
  }
  return model;
}

Prediction PredictFromFeatures(const EniqaModel& model, const FeatureVector& features) {
  const std::vector<double> x = ApplyScaler(model.scaler, FeatureSubset(features, model.kind));
  Prediction pred;
  pred.probabilities = PredictProba(model.classifier, x);
  for (std::size_t d = 0; d < model.classes().size(); ++d) {
    const double q = PredictSvr(model.regressors.at(model.classes()[d]), x);
    pred.class_scores.push_back(q);
    pred.score += pred.probabilities[d] * q;
  }
  pred.predicted_class = static_cast<int>(
      std::max_element(pred.probabilities.begin(), pred.probabilities.end()) -
      pred.probabilities.begin());
  return pred;
}

Prediction PredictScore(const EniqaModel& model, const RgbImage& img) {
  return PredictFromFeatures(model, ExtractFeatures(img, model.feature_config));
}

Prediction PredictScore(const EniqaModel& model, const RgbImage& img,
                        const FeatureConfig& extraction) {
  if (!(extraction == model.feature_config)) {
    Fail(ErrorKind::kConfig, "feature configuration differs from the model's (model: " +
                                 model.feature_config.Describe() +
                                 "; requested: " + extraction.Describe() + ")");
  }
  return PredictScore(model, img);
}

namespace {

void WriteConfig(std::ostream& out, const EniqaModel& model) {
  const FeatureConfig& f = model.feature_config;
  out << "[config]\n";
  out << "layout_version " << f.layout_version << '\n';
  out << "model_kind " << ModelKindName(model.kind) << '\n';
  out << "window " << f.window_rows << ' ' << f.window_cols << '\n';
  out << "keep_fraction " << FormatDouble(f.keep_fraction) << '\n';
  out << "center_freqs " << FormatDouble(f.log_gabor.center_freqs[0]) << ' '
      << FormatDouble(f.log_gabor.center_freqs[1]) << '\n';
  out << "orientations";
  for (const double o : f.log_gabor.orientations) out << ' ' << FormatDouble(o);
  out << '\n';
  out << "sigma_ratio " << FormatDouble(f.log_gabor.sigma_ratio) << '\n';
  out << "sigma_theta " << FormatDouble(f.log_gabor.sigma_theta) << '\n';
  out << "svm_c " << FormatDouble(model.svm.c) << '\n';
  out << "svm_gamma " << FormatDouble(model.svm.gamma) << '\n';
  out << "svr_epsilon " << FormatDouble(model.svm.epsilon) << '\n';
  out << "seed " << model.seed << '\n';
}

void ReadConfig(ModelReader& reader, EniqaModel& model) {
  FeatureConfig& f = model.feature_config;
  f.layout_version = static_cast<int>(reader.ParseCount(reader.RequireFields("layout_version", 1)[0]));
  if (f.layout_version != kFeatureLayoutVersion) {
    reader.Error("unsupported feature layout version " + std::to_string(f.layout_version));
  }
  const std::string kind = reader.RequireFields("model_kind", 1)[0];
  try {
    model.kind = ParseModelKind(kind);
  } catch (const Error&) {
    reader.Error("unknown model kind '" + kind + "'");
  }
  const auto window = reader.RequireFields("window", 2);
  f.window_rows = static_cast<int>(reader.ParseCount(window[0]));
  f.window_cols = static_cast<int>(reader.ParseCount(window[1]));
  f.keep_fraction = reader.ParseNumber(reader.RequireFields("keep_fraction", 1)[0]);
  const auto freqs = reader.RequireFields("center_freqs", 2);
  for (int i = 0; i < 2; ++i) f.log_gabor.center_freqs[i] = reader.ParseNumber(freqs[i]);
  const auto orients = reader.RequireFields("orientations", 4);
  for (int i = 0; i < 4; ++i) f.log_gabor.orientations[i] = reader.ParseNumber(orients[i]);
  f.log_gabor.sigma_ratio = reader.ParseNumber(reader.RequireFields("sigma_ratio", 1)[0]);
  f.log_gabor.sigma_theta = reader.ParseNumber(reader.RequireFields("sigma_theta", 1)[0]);
  model.svm.c = reader.ParseNumber(reader.RequireFields("svm_c", 1)[0]);
  model.svm.gamma = reader.ParseNumber(reader.RequireFields("svm_gamma", 1)[0]);
  model.svm.epsilon = reader.ParseNumber(reader.RequireFields("svr_epsilon", 1)[0]);
  model.seed = static_cast<std::uint64_t>(reader.ParseCount(reader.RequireFields("seed", 1)[0]));
  try {
    f.Validate();
  } catch (const Error& e) {
    reader.Error(e.what());
  }
}

}  // namespace

void WriteModel(std::ostream& out, const EniqaModel& model) {
  out << kModelHeader << '\n';
  WriteConfig(out, model);
  WriteScaler(out, model.scaler);
  WriteSvc(out, model.classifier);
  for (const auto& label : model.classifier.classes) {
    WriteSvr(out, model.regressors.at(label), label);
  }
}

EniqaModel ReadModel(std::istream& in) {
  ModelReader reader(in);
  reader.ExpectHeader();
  EniqaModel model;
  bool have_config = false;
  bool have_scaler = false;
  bool have_svc = false;
  std::string line;
  while (reader.NextLine(line)) {
    const std::string section(Trim(line));
    if (section == "[config]") {
      ReadConfig(reader, model);
      have_config = true;
    } else if (section == "[scaler]") {
      model.scaler = ReadScaler(reader);
      have_scaler = true;
    } else if (section == "[svc]") {
      model.classifier = ReadSvc(reader);
      have_svc = true;
    } else if (section.starts_with("[svr:") && section.ends_with("]") && section.size() > 6) {
      const std::string label = section.substr(5, section.size() - 6);
      if (!model.regressors.emplace(label, ReadSvr(reader)).second) {
        reader.Error("duplicate section " + section);
      }
    } else {
      reader.Error("unexpected line '" + section + "'");
    }
  }
  if (!have_config) reader.Error("truncated model: missing [config] section");
  if (!have_scaler) reader.Error("truncated model: missing [scaler] section");
  if (!have_svc) reader.Error("truncated model: missing [svc] section");
  try {
    model.Validate();
  } catch (const Error& e) {
    reader.Error(e.what());
  }
  return model;
}

std::string SerializeModel(const EniqaModel& model) {
  std::ostringstream out;
  WriteModel(out, model);
  return out.str();
}

EniqaModel DeserializeModel(const std::string& text) {
  std::istringstream in(text);
  return ReadModel(in);
}

void SaveModel(const EniqaModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path);
  WriteModel(out, model);
  if (!out) Fail(ErrorKind::kIo, "write failed for " + path);
}

EniqaModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  try {
    return ReadModel(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace eniqa
