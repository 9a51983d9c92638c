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

// eniqa-cli: batch feature extraction, training, prediction and evaluation.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 data/parse error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eniqa/eniqa.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// Thrown to leave a command with a specific exit code after printing `message`.
struct CommandError {
  int code;
  std::string message;
};

int ExitCodeFor(eniqa_status status) {
  switch (status) {
    case ENIQA_OK: return kExitOk;
    case ENIQA_ERR_ARGUMENT:
    case ENIQA_ERR_CONFIG: return kExitUsage;
    case ENIQA_ERR_DECODE:
    case ENIQA_ERR_PARSE:
    case ENIQA_ERR_SIZE: return kExitData;
    default: return kExitRuntime;
  }
}

void Check(eniqa_status status, const std::string& context) {
  if (status == ENIQA_OK) return;
  throw CommandError{ExitCodeFor(status), context + ": " + eniqa_last_error()};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ConfigPtr = std::unique_ptr<eniqa_config, Deleter<eniqa_config, eniqa_config_destroy>>;
using ManifestPtr =
    std::unique_ptr<eniqa_manifest, Deleter<eniqa_manifest, eniqa_manifest_destroy>>;
using FeatureSetPtr =
    std::unique_ptr<eniqa_feature_set, Deleter<eniqa_feature_set, eniqa_feature_set_destroy>>;
using ModelPtr = std::unique_ptr<eniqa_model, Deleter<eniqa_model, eniqa_model_destroy>>;
using ReportPtr = std::unique_ptr<eniqa_report, Deleter<eniqa_report, eniqa_report_destroy>>;
using TablePtr = std::unique_ptr<eniqa_table, Deleter<eniqa_table, eniqa_table_destroy>>;

struct Options {
  std::string window = "8x8";
  double keep_fraction = 0.8;
  double freq_high = 1.0 / 3.0;
  double freq_low = 1.0 / 6.0;
  double sigma_ratio = 0.55;
  double sigma_theta = std::numbers::pi / 6.0;
  double c = 1e-4;
  double gamma = 1e-4;
  double epsilon = 0.1;
  int trials = 1000;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  std::string model_kind = "full";
  int jobs = 1;
  bool keep_going = false;
  std::string cache_dir;
  std::string output;
  std::string manifest;
  std::string model;
  std::vector<std::string> images;
  std::vector<std::string> cross_db;
  std::vector<std::string> labels = {"JP2K", "JPEG", "WN", "GBLUR"};
  std::string out_dir;
  bool sweep = false;
  std::vector<std::string> sweep_sizes;
  std::vector<double> grid_c;
  std::vector<double> grid_gamma;
};

std::pair<int, int> ParseWindow(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const int rows = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    const std::string rest = text.substr(x + 1);
    const int cols = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {rows, cols};
  } catch (const std::exception&) {
    throw CommandError{kExitUsage, "invalid window '" + text + "': expected KxL, e.g. 8x8"};
  }
}

ConfigPtr MakeConfig(const Options& o) {
  eniqa_config* raw = nullptr;
  Check(eniqa_config_create(&raw), "config");
  ConfigPtr config(raw);
  const auto [rows, cols] = ParseWindow(o.window);
  Check(eniqa_config_set_window(config.get(), rows, cols), "--window");
  Check(eniqa_config_set_keep_fraction(config.get(), o.keep_fraction), "--keep-fraction");
  Check(eniqa_config_set_log_gabor(config.get(), o.freq_high, o.freq_low, o.sigma_ratio,
                                   o.sigma_theta),
        "log-Gabor parameters");
  Check(eniqa_config_set_svm(config.get(), o.c, o.gamma, o.epsilon), "SVM parameters");
  Check(eniqa_config_set_trials(config.get(), o.trials), "--trials");
  Check(eniqa_config_set_train_fraction(config.get(), o.train_fraction), "--train-fraction");
  Check(eniqa_config_set_seed(config.get(), o.seed), "--seed");
  Check(eniqa_config_set_model_kind(config.get(), o.model_kind.c_str()), "--model-kind");
  Check(eniqa_config_set_jobs(config.get(), o.jobs), "--jobs");
  Check(eniqa_config_set_cache_dir(config.get(), o.cache_dir.c_str()), "--cache-dir");
  return config;
}

ManifestPtr LoadManifest(const std::string& path) {
  eniqa_manifest* raw = nullptr;
  Check(eniqa_manifest_load(path.c_str(), &raw), "manifest " + path);
  return ManifestPtr(raw);
}

// The manifest named by --manifest, or an unlabeled one built from image paths.
ManifestPtr InputManifest(const Options& o) {
  if (!o.manifest.empty() && !o.images.empty()) {
    throw CommandError{kExitUsage, "give either --manifest or image paths, not both"};
  }
  if (!o.manifest.empty()) return LoadManifest(o.manifest);
  if (o.images.empty()) throw CommandError{kExitUsage, "no input images"};
  std::vector<const char*> paths;
  for (const auto& p : o.images) paths.push_back(p.c_str());
  eniqa_manifest* raw = nullptr;
  Check(eniqa_manifest_from_paths(paths.data(), paths.size(), &raw), "inputs");
  return ManifestPtr(raw);
}

FeatureSetPtr Extract(const eniqa_config* config, const eniqa_manifest* manifest,
                      bool keep_going) {
  eniqa_feature_set* raw = nullptr;
  const eniqa_status status = eniqa_feature_set_extract(config, manifest, keep_going, &raw);
  if (status != ENIQA_OK) {
    // An unreadable image aborts the batch as a runtime failure.
    throw CommandError{kExitRuntime, std::string("extraction failed: ") + eniqa_last_error()};
  }
  FeatureSetPtr set(raw);
  for (std::size_t i = 0; i < eniqa_feature_set_size(set.get()); ++i) {
    const char* error = eniqa_feature_set_error(set.get(), i);
    if (error && *error) std::cerr << "error: " << error << "\n";
  }
  return set;
}

// Writes `text` to `path`, or stdout when `path` is empty or "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CommandError{kExitRuntime, "cannot write " + path};
  out << text;
  if (!out) throw CommandError{kExitRuntime, "write failed: " + path};
}

std::string JoinPath(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : dir + "/" + name;
}

void AddFeatureOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--window", o.window, "Patch window KxL")->capture_default_str();
  cmd->add_option("--keep-fraction", o.keep_fraction, "Fraction of most salient patches kept")
      ->capture_default_str();
  cmd->add_option("--freq-high", o.freq_high, "Higher log-Gabor center frequency (cycles/px)")
      ->capture_default_str();
  cmd->add_option("--freq-low", o.freq_low, "Lower log-Gabor center frequency (cycles/px)")
      ->capture_default_str();
  cmd->add_option("--sigma-ratio", o.sigma_ratio, "Log-Gabor radial bandwidth sigma_r/f0")
      ->capture_default_str();
  cmd->add_option("--sigma-theta", o.sigma_theta, "Log-Gabor angular bandwidth (radians)")
      ->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
  cmd->add_option("--cache-dir", o.cache_dir, "Feature cache directory (disabled if empty)");
}

void AddModelOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--c", o.c, "SVM cost C")->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "RBF kernel gamma")->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "SVR epsilon")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Root random seed")->capture_default_str();
  cmd->add_option("--model-kind", o.model_kind, "Feature subset: full|eniqa1|eniqa2|eniqa3")
      ->capture_default_str();
}

int RunExtract(const Options& o) {
  auto config = MakeConfig(o);
  auto manifest = InputManifest(o);
  auto set = Extract(config.get(), manifest.get(), o.keep_going);
  const char* csv = nullptr;
  Check(eniqa_feature_set_csv(set.get(), &csv), "feature CSV");
  Emit(o.output, csv);
  return eniqa_feature_set_failures(set.get()) ? kExitRuntime : kExitOk;
}

int RunTrain(const Options& o) {
  if (o.manifest.empty()) throw CommandError{kExitUsage, "--manifest is required"};
  if (o.output.empty()) throw CommandError{kExitUsage, "--output is required"};
  auto config = MakeConfig(o);
  auto manifest = LoadManifest(o.manifest);
  auto set = Extract(config.get(), manifest.get(), false);
  eniqa_model* raw = nullptr;
  Check(eniqa_model_train(config.get(), manifest.get(), set.get(), &raw), "training");
  ModelPtr model(raw);
  Check(eniqa_model_save(model.get(), o.output.c_str()), "saving model");
  return kExitOk;
}

int RunPredict(const Options& o) {
  if (o.model.empty()) throw CommandError{kExitUsage, "--model is required"};
  eniqa_model* raw_model = nullptr;
  Check(eniqa_model_load(o.model.c_str(), &raw_model), "model " + o.model);
  ModelPtr model(raw_model);
  eniqa_config* raw_config = nullptr;
  Check(eniqa_model_config(model.get(), &raw_config), "model config");
  ConfigPtr config(raw_config);
  Check(eniqa_config_set_jobs(config.get(), o.jobs), "--jobs");
  Check(eniqa_config_set_cache_dir(config.get(), o.cache_dir.c_str()), "--cache-dir");
  auto manifest = InputManifest(o);
  auto set = Extract(config.get(), manifest.get(), o.keep_going);
  eniqa_table* raw_table = nullptr;
  Check(eniqa_model_predict_csv(model.get(), set.get(), &raw_table), "prediction");
  TablePtr table(raw_table);
  Emit(o.output, eniqa_table_csv(table.get()));
  return eniqa_feature_set_failures(set.get()) ? kExitRuntime : kExitOk;
}

void WriteReport(eniqa_report* report, const std::string& out_dir) {
  const char* text = nullptr;
  Check(eniqa_report_text(report, &text), "report");
  std::cout << text;
  if (out_dir.empty()) return;
  const char* csv = nullptr;
  Emit(JoinPath(out_dir, "report.txt"), text);
  Check(eniqa_report_csv(report, &csv), "report");
  Emit(JoinPath(out_dir, "report.csv"), csv);
  Check(eniqa_report_trials_csv(report, &csv), "report");
  Emit(JoinPath(out_dir, "trials.csv"), csv);
  Check(eniqa_report_confusion_csv(report, &csv), "report");
  Emit(JoinPath(out_dir, "confusion.csv"), csv);
}

int RunEvaluate(const Options& o) {
  auto config = MakeConfig(o);
  if (!o.cross_db.empty()) {
    if (o.cross_db.size() != 2) {
      throw CommandError{kExitUsage, "--cross-db takes TRAIN.csv TEST.csv"};
    }
    auto train = LoadManifest(o.cross_db[0]);
    auto test = LoadManifest(o.cross_db[1]);
    auto train_set = Extract(config.get(), train.get(), false);
    auto test_set = Extract(config.get(), test.get(), false);
    std::vector<const char*> labels;
    for (const auto& l : o.labels) labels.push_back(l.c_str());
    eniqa_report* raw = nullptr;
    Check(eniqa_evaluate_cross_db(config.get(), train.get(), train_set.get(), test.get(),
                                  test_set.get(), labels.data(), labels.size(), &raw),
          "cross-database evaluation");
    ReportPtr report(raw);
    WriteReport(report.get(), o.out_dir);
    return kExitOk;
  }
  if (o.manifest.empty()) {
    throw CommandError{kExitUsage, "--manifest or --cross-db is required"};
  }
  auto manifest = LoadManifest(o.manifest);
  if (o.sweep) {
    std::vector<int> rows;
    std::vector<int> cols;
    for (const auto& s : o.sweep_sizes) {
      const auto [r, c] = ParseWindow(s);
      rows.push_back(r);
      cols.push_back(c);
    }
    eniqa_table* raw = nullptr;
    Check(eniqa_window_sweep(config.get(), manifest.get(), rows.data(), cols.data(), rows.size(),
                             &raw),
          "window sweep");
    TablePtr table(raw);
    Emit(o.out_dir.empty() ? "" : JoinPath(o.out_dir, "sweep.csv"), eniqa_table_csv(table.get()));
    return kExitOk;
  }
  auto set = Extract(config.get(), manifest.get(), false);
  if (!o.grid_c.empty() || !o.grid_gamma.empty()) {
    const std::vector<double> costs = o.grid_c.empty() ? std::vector<double>{o.c} : o.grid_c;
    const std::vector<double> gammas =
        o.grid_gamma.empty() ? std::vector<double>{o.gamma} : o.grid_gamma;
    eniqa_table* raw = nullptr;
    Check(eniqa_grid_search(config.get(), manifest.get(), set.get(), costs.data(), costs.size(),
                            gammas.data(), gammas.size(), &raw),
          "grid search");
    TablePtr table(raw);
    Emit(o.out_dir.empty() ? "" : JoinPath(o.out_dir, "grid.csv"), eniqa_table_csv(table.get()));
    return kExitOk;
  }
  eniqa_report* raw = nullptr;
  Check(eniqa_evaluate_cv(config.get(), manifest.get(), set.get(), &raw), "cross-validation");
  ReportPtr report(raw);
  WriteReport(report.get(), o.out_dir);
  return kExitOk;
}

int RunSelftest() {
  int failures = 0;
  const char* log = nullptr;
  Check(eniqa_selftest(&failures, &log), "selftest");
  std::cout << log;
  std::cout << (failures ? "selftest FAILED\n" : "selftest passed\n");
  return failures ? kExitRuntime : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-based no-reference image quality assessment"};
  app.require_subcommand(1);
  app.set_version_flag("--version", eniqa_version());
  Options o;

  auto* extract = app.add_subcommand("extract", "Write the 56 features of each image as CSV");
  AddFeatureOptions(extract, o);
  extract->add_option("--manifest", o.manifest, "Manifest CSV listing the images");
  extract->add_option("images", o.images, "Image files (BMP, PPM, PGM)");
  extract->add_option("-o,--output", o.output, "Output CSV (default: stdout)");
  extract->add_flag("--keep-going", o.keep_going, "Continue past unreadable images");

  auto* train = app.add_subcommand("train", "Train a model on a labeled manifest");
  AddFeatureOptions(train, o);
  AddModelOptions(train, o);
  train->add_option("--manifest", o.manifest, "Training manifest CSV")->required();
  train->add_option("-o,--output", o.output, "Model file to write")->required();

  auto* predict = app.add_subcommand("predict", "Score images with a trained model");
  predict->add_option("--model", o.model, "Model file")->required();
  predict->add_option("--manifest", o.manifest, "Manifest CSV listing the images");
  predict->add_option("images", o.images, "Image files (BMP, PPM, PGM)");
  predict->add_option("-o,--output", o.output, "Output CSV (default: stdout)");
  predict->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
  predict->add_option("--cache-dir", o.cache_dir, "Feature cache directory (disabled if empty)");
  predict->add_flag("--keep-going", o.keep_going, "Continue past unreadable images");

  auto* evaluate = app.add_subcommand("evaluate", "Run the evaluation protocols");
  AddFeatureOptions(evaluate, o);
  AddModelOptions(evaluate, o);
  evaluate->add_option("--manifest", o.manifest, "Manifest for cross-validation");
  evaluate->add_option("--cross-db", o.cross_db, "Train on the first manifest, test on the second")
      ->expected(2);
  evaluate->add_option("--labels", o.labels, "Distortion labels shared by both databases")
      ->delimiter(',')
      ->capture_default_str();
  evaluate->add_option("--trials", o.trials, "Random train/test trials")->capture_default_str();
  evaluate->add_option("--train-fraction", o.train_fraction,
                       "Fraction of reference images used for training")
      ->capture_default_str();
  evaluate->add_flag("--sweep", o.sweep, "Sweep window sizes instead of a single evaluation");
  evaluate->add_option("--sizes", o.sweep_sizes,
                       "Window sizes for --sweep (default: 6x6,8x8,12x12,16x16,32x32)")
      ->delimiter(',');
  evaluate->add_option("--grid-c", o.grid_c, "Costs for a (C, gamma) grid search")
      ->delimiter(',');
  evaluate->add_option("--grid-gamma", o.grid_gamma, "Gammas for a (C, gamma) grid search")
      ->delimiter(',');
  evaluate->add_option("--out-dir", o.out_dir,
                       "Directory for report.txt, report.csv, trials.csv, confusion.csv");

  auto* selftest = app.add_subcommand("selftest", "Run dataset-free invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (extract->parsed()) {
      if (o.manifest.empty() && o.images.empty()) {
        throw CommandError{kExitUsage, "no input images"};
      }
      return RunExtract(o);
    }
    if (train->parsed()) return RunTrain(o);
    if (predict->parsed()) return RunPredict(o);
    if (evaluate->parsed()) return RunEvaluate(o);
    if (selftest->parsed()) return RunSelftest();
  } catch (const CommandError& e) {
    std::cerr << "eniqa-cli: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "eniqa-cli: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
