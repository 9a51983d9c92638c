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

#include "eniqa/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "eniqa/error.hpp"
#include "eniqa/numfmt.hpp"
#include "eniqa/parallel.hpp"
#include "eniqa/rng.hpp"

namespace eniqa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double StdDev(std::span<const double> v) {
  const double m = Mean(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double Median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return !std::isfinite(x); });
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<double> AverageRanks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double Pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    Fail(ErrorKind::kArgument, "correlation needs two equal-length vectors of length >= 2");
  }
  const double ma = Mean(a);
  const double mb = Mean(b);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) {
    Fail(ErrorKind::kArgument, "correlation undefined for a constant vector");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double Srocc(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 3) {
    Fail(ErrorKind::kArgument, "SROCC needs two equal-length vectors of length >= 3");
  }
  const auto ra = AverageRanks(a);
  const auto rb = AverageRanks(b);
  return Pearson(ra, rb);
}

NelderMeadResult NelderMead(const std::function<double(std::span<const double>)>& f,
                            std::vector<double> x0, std::vector<double> steps,
                            const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  NelderMeadResult result;
  result.x = std::move(x0);
  result.value = f(result.x);
  result.evaluations = 1;

  for (int run = 0; run <= options.restarts; ++run) {
    std::vector<std::vector<double>> simplex(n + 1, result.x);
    std::vector<double> values(n + 1, result.value);
    for (std::size_t i = 0; i < n; ++i) {
      simplex[i + 1][i] += steps[i];
      values[i + 1] = f(simplex[i + 1]);
    }
    long evaluations = static_cast<long>(n);
    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n);
    std::vector<double> trial(n);
    std::vector<double> trial2(n);

    while (true) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second_worst = order[n - 1];

      double diameter = 0.0;
      for (std::size_t v = 0; v <= n; ++v) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = simplex[v][i] - simplex[best][i];
          d2 += d * d;
        }
        diameter = std::max(diameter, std::sqrt(d2));
      }
      if (diameter < options.diameter_tolerance || evaluations >= options.max_evaluations) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == worst) continue;
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v][i] / static_cast<double>(n);
      }
      auto along = [&](double t, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
          out[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
        }
        ++evaluations;
        const double value = f(out);
        return std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
      };

      const double reflected = along(-1.0, trial);
      if (reflected < values[best]) {
        const double expanded = along(-2.0, trial2);
        if (expanded < reflected) {
          simplex[worst] = trial2;
          values[worst] = expanded;
        } else {
          simplex[worst] = trial;
          values[worst] = reflected;
        }
      } else if (reflected < values[second_worst]) {
        simplex[worst] = trial;
        values[worst] = reflected;
      } else {
        const bool outside = reflected < values[worst];
        const double contracted = along(outside ? -0.5 : 0.5, trial2);
        if (contracted < (outside ? reflected : values[worst])) {
          simplex[worst] = trial2;
          values[worst] = contracted;
        } else {
          for (std::size_t v = 0; v <= n; ++v) {
            if (v == best) continue;
            for (std::size_t i = 0; i < n; ++i) {
              simplex[v][i] = simplex[best][i] + 0.5 * (simplex[v][i] - simplex[best][i]);
            }
            values[v] = f(simplex[v]);
            if (std::isnan(values[v])) values[v] = std::numeric_limits<double>::infinity();
            ++evaluations;
          }
        }
      }
    }
    result.evaluations += evaluations;
    const auto best_it = std::min_element(values.begin(), values.end());
    if (*best_it <= result.value) {
      result.value = *best_it;
      result.x = simplex[best_it - values.begin()];
    }
  }
  return result;
}

double LogisticParams::Evaluate(double z) const {
  return beta[0] * (0.5 - 1.0 / (1.0 + std::exp(beta[1] * (z - beta[2])))) + beta[3] * z +
         beta[4];
}

LogisticFit FitLogistic5(std::span<const double> z, std::span<const double> y) {
  if (z.size() != y.size() || z.size() < 5) {
    Fail(ErrorKind::kArgument, "logistic fit needs at least 5 paired scores");
  }
  const double sz = StdDev(z);
  if (!(sz > 0.0)) Fail(ErrorKind::kArgument, "logistic fit undefined for constant scores");
  const double sy = StdDev(y);
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());

  auto sse = [&](std::span<const double> b) {
    LogisticParams p;
    std::copy(b.begin(), b.end(), p.beta.begin());
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double r = p.Evaluate(z[i]) - y[i];
      s += r * r;
    }
    return s;
  };

  std::vector<double> x0 = {*ymax - *ymin, 1.0 / sz, Mean(z), 0.0, Mean(y)};
  const double y_scale = sy > 0.0 ? sy : 1.0;
  std::vector<double> steps = {
      x0[0] != 0.0 ? 0.1 * x0[0] : 0.1 * y_scale,
      0.5 * x0[1],
      0.5 * sz,
      0.1 * y_scale / sz,
      0.1 * y_scale,
  };
  LogisticFit fit;
  fit.initial_sse = sse(x0);
  const NelderMeadResult nm = NelderMead(sse, x0, steps);
  std::copy(nm.x.begin(), nm.x.end(), fit.params.beta.begin());
  fit.sse = nm.value;
  fit.evaluations = nm.evaluations;
  return fit;
}

CorrelationMetrics PlccRmse(std::span<const double> z, std::span<const double> y) {
  const LogisticFit fit = FitLogistic5(z, y);
  std::vector<double> mapped(z.size());
  double se = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    mapped[i] = fit.params.Evaluate(z[i]);
    se += (mapped[i] - y[i]) * (mapped[i] - y[i]);
  }
  CorrelationMetrics m;
  m.logistic = fit.params;
  m.rmse = std::sqrt(se / static_cast<double>(z.size()));
  m.plcc = Pearson(mapped, y);
  m.srocc = kNaN;
  return m;
}

CorrelationMetrics ComputeMetrics(std::span<const double> z, std::span<const double> y) {
  const double srocc = Srocc(z, y);
  CorrelationMetrics m = PlccRmse(z, y);
  m.srocc = srocc;
  return m;
}

// ---------------------------------------------------------------------------
// Feature cache and batch extraction.

FeatureCache::FeatureCache(std::string directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create cache directory " + directory_);
}

std::string FeatureCache::Key(std::span<const std::uint8_t> image_bytes,
                              const FeatureConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const std::uint8_t b : image_bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%016llx-%016llx", static_cast<unsigned long long>(h),
                static_cast<unsigned long long>(config.Hash()));
  return buf;
}

std::optional<FeatureVector> FeatureCache::Lookup(const std::string& key) const {
  std::ifstream in(directory_ + "/" + key + ".feat");
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header) || header != "ENIQA-FEATURES v1") return std::nullopt;
  FeatureVector v;
  std::string token;
  for (int i = 0; i < kNumFeatures; ++i) {
    if (!(in >> token) || !ParseDouble(token, v.values[i])) return std::nullopt;
  }
  return v;
}

void FeatureCache::Store(const std::string& key, const FeatureVector& features) const {
  static std::atomic<unsigned long> counter{0};
  const std::string final_path = directory_ + "/" + key + ".feat";
  const std::string tmp_path = final_path + ".tmp" + std::to_string(counter.fetch_add(1)) +
                               "-" + std::to_string(std::hash<std::thread::id>{}(
                                         std::this_thread::get_id()));
  {
    std::ofstream out(tmp_path);
    if (!out) Fail(ErrorKind::kIo, "cannot write cache entry " + tmp_path);
    out << "ENIQA-FEATURES v1\n";
    for (const double x : features.values) out << FormatDouble(x) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) std::filesystem::remove(tmp_path, ec);
}

ExtractionResult ExtractManifestFeatures(const DatasetManifest& manifest,
                                         const FeatureConfig& config,
                                         const FeatureCache* cache, int jobs,
                                         bool keep_going) {
  config.Validate();
  const std::size_t n = manifest.records.size();
  ExtractionResult result;
  result.features.resize(n);
  result.errors.assign(n, "");
  std::vector<double> seconds(n, kNaN);
  std::vector<char> hit(n, 0);
  ParallelFor(n, jobs, [&](std::size_t i) {
    try {
      const auto bytes = ReadFileBytes(manifest.records[i].image_path);
      std::string key;
      if (cache) {
        key = FeatureCache::Key(bytes, config);
        if (auto cached = cache->Lookup(key)) {
          result.features[i] = *cached;
          hit[i] = 1;
          return;
        }
      }
      const auto start = std::chrono::steady_clock::now();
      RgbImage img;
      try {
        img = DecodeImage(bytes);
      } catch (const Error& e) {
        throw Error(e.kind(), manifest.records[i].image_path + ": " + e.what());
      }
      result.features[i] = ExtractFeatures(img, config);
      seconds[i] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (cache) cache->Store(key, result.features[i]);
    } catch (const Error& e) {
      result.errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (!result.errors[i].empty() && !keep_going) {
      Fail(ErrorKind::kIo, result.errors[i]);
    }
  }
  std::vector<double> timed;
  for (const double s : seconds) {
    if (std::isfinite(s)) timed.push_back(s);
  }
  result.seconds_per_image = timed.empty() ? 0.0 : Mean(timed);
  result.cache_hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  return result;
}

// ---------------------------------------------------------------------------
// Protocols.

void EvalConfig::Validate() const {
  if (trials < 1) Fail(ErrorKind::kConfig, "trials must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    Fail(ErrorKind::kConfig, "train fraction must lie in (0, 1); the test side cannot be empty");
  }
  if (max_resamples < 1) Fail(ErrorKind::kConfig, "max_resamples must be >= 1");
  svm.Validate();
  features.Validate();
}

std::string EvalConfig::Describe() const {
  std::ostringstream out;
  out << "trials=" << trials << " train_fraction=" << FormatDouble(train_fraction)
      << " seed=" << seed << " model_kind=" << ModelKindName(kind)
      << " svm_c=" << FormatDouble(svm.c) << " svm_gamma=" << FormatDouble(svm.gamma)
      << " svr_epsilon=" << FormatDouble(svm.epsilon) << " " << features.Describe();
  return out.str();
}

namespace {

std::vector<TrainingSample> Samples(const DatasetManifest& manifest,
                                    const std::vector<FeatureVector>& features,
                                    const std::vector<std::size_t>& rows) {
  std::vector<TrainingSample> out;
  out.reserve(rows.size());
  for (const std::size_t r : rows) {
    out.push_back({features[r], manifest.records[r].label, manifest.records[r].score});
  }
  return out;
}

CorrelationMetrics SafeMetrics(const std::vector<double>& z, const std::vector<double>& y) {
  CorrelationMetrics m;
  m.srocc = m.plcc = m.rmse = kNaN;
  try {
    m.srocc = Srocc(z, y);
  } catch (const Error&) {
  }
  try {
    const CorrelationMetrics fitted = PlccRmse(z, y);
    m.plcc = fitted.plcc;
    m.rmse = fitted.rmse;
    m.logistic = fitted.logistic;
  } catch (const Error&) {
  }
  return m;
}

// Predicts `test_rows` with `model` and fills the metric fields of `trial`.
void ScoreTrial(const EniqaModel& model, const DatasetManifest& manifest,
                const std::vector<FeatureVector>& features,
                const std::vector<std::size_t>& test_rows,
                const std::vector<std::string>& report_classes, TrialResult& trial) {
  const auto& model_classes = model.classes();
  std::size_t correct = 0;
  for (const std::size_t r : test_rows) {
    const Prediction pred = PredictFromFeatures(model, features[r]);
    const auto& label = manifest.records[r].label;
    const int truth = static_cast<int>(
        std::find(model_classes.begin(), model_classes.end(), label) - model_classes.begin());
    trial.true_class.push_back(truth);
    trial.predicted_class.push_back(pred.predicted_class);
    trial.predicted_score.push_back(pred.score);
    trial.subjective_score.push_back(manifest.records[r].score);
    if (truth == pred.predicted_class) ++correct;
  }
  trial.test_size = test_rows.size();
  trial.accuracy = test_rows.empty() ? kNaN : static_cast<double>(correct) / test_rows.size();
  trial.overall = SafeMetrics(trial.predicted_score, trial.subjective_score);
  for (const auto& label : report_classes) {
    std::vector<double> z;
    std::vector<double> y;
    for (std::size_t k = 0; k < test_rows.size(); ++k) {
      if (manifest.records[test_rows[k]].label != label) continue;
      z.push_back(trial.predicted_score[k]);
      y.push_back(trial.subjective_score[k]);
    }
    trial.per_class[label] = SafeMetrics(z, y);
  }
}

void Summarize(EvalReport& report) {
  std::vector<double> s, p, r, acc;
  std::map<std::string, std::array<std::vector<double>, 3>> per;
  for (const auto& t : report.trial_results) {
    s.push_back(t.overall.srocc);
    p.push_back(t.overall.plcc);
    r.push_back(t.overall.rmse);
    acc.push_back(t.accuracy);
    for (const auto& [label, m] : t.per_class) {
      per[label][0].push_back(m.srocc);
      per[label][1].push_back(m.plcc);
      per[label][2].push_back(m.rmse);
    }
    if (t.resamples > 0) {
      ++report.resampled_trials;
      report.total_resamples += t.resamples;
    }
  }
  report.overall = {Median(s), Median(p), Median(r),
                    static_cast<int>(std::count_if(s.begin(), s.end(),
                                                   [](double v) { return std::isfinite(v); }))};
  for (auto& [label, v] : per) {
    report.per_class[label] = {
        Median(v[0]), Median(v[1]), Median(v[2]),
        static_cast<int>(std::count_if(v[0].begin(), v[0].end(),
                                       [](double x) { return std::isfinite(x); }))};
  }
  report.median_accuracy = Median(acc);
  report.confusion = ConfusionMatrix(report.trial_results, report.classes.size());
  report.trials = static_cast<int>(report.trial_results.size());
  if (!report.trial_results.empty()) {
    report.final_logistic = report.trial_results.back().overall.logistic;
  }
  report.CheckInvariants();
}

}  // namespace

ConfusionResult ConfusionMatrix(const std::vector<TrialResult>& trials, std::size_t classes) {
  ConfusionResult out;
  out.matrix.assign(classes, std::vector<double>(classes, 0.0));
  out.row_support.assign(classes, 0);
  std::vector<double> accuracies;
  for (const TrialResult& t : trials) {
    Matrix counts(classes, std::vector<double>(classes, 0.0));
    for (std::size_t k = 0; k < t.true_class.size(); ++k) {
      const int truth = t.true_class[k];
      const int pred = t.predicted_class[k];
      if (truth < 0 || truth >= static_cast<int>(classes) || pred < 0 ||
          pred >= static_cast<int>(classes)) {
        continue;
      }
      counts[truth][pred] += 1.0;
    }
    for (std::size_t i = 0; i < classes; ++i) {
      const double total = std::accumulate(counts[i].begin(), counts[i].end(), 0.0);
      if (total == 0.0) continue;
      ++out.row_support[i];
      for (std::size_t j = 0; j < classes; ++j) out.matrix[i][j] += counts[i][j] / total;
    }
    if (std::isfinite(t.accuracy)) accuracies.push_back(t.accuracy);
  }
  out.per_class_accuracy.assign(classes, kNaN);
  for (std::size_t i = 0; i < classes; ++i) {
    if (out.row_support[i] == 0) continue;
    for (double& v : out.matrix[i]) v /= out.row_support[i];
    out.per_class_accuracy[i] = out.matrix[i][i];
  }
  out.mean_accuracy = accuracies.empty() ? kNaN : Mean(accuracies);
  return out;
}

void EvalReport::CheckInvariants() const {
  auto check_corr = [](double v, const char* what) {
    if (std::isfinite(v) && (v < -1.0 - 1e-12 || v > 1.0 + 1e-12)) {
      Fail(ErrorKind::kInternal, std::string(what) + " outside [-1, 1]");
    }
  };
  check_corr(overall.srocc, "SROCC");
  check_corr(overall.plcc, "PLCC");
  if (std::isfinite(overall.rmse) && overall.rmse < 0.0) {
    Fail(ErrorKind::kInternal, "negative RMSE");
  }
  for (const auto& [label, m] : per_class) {
    check_corr(m.srocc, "SROCC");
    check_corr(m.plcc, "PLCC");
  }
  for (std::size_t i = 0; i < confusion.matrix.size(); ++i) {
    if (confusion.row_support[i] == 0) continue;
    const double sum =
        std::accumulate(confusion.matrix[i].begin(), confusion.matrix[i].end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) Fail(ErrorKind::kInternal, "confusion row does not sum to 1");
  }
}

EvalReport CrossValidate(const DatasetManifest& manifest,
                         const std::vector<FeatureVector>& features, const EvalConfig& config) {
  config.Validate();
  if (features.size() != manifest.records.size()) {
    Fail(ErrorKind::kArgument, "one feature vector per manifest record is required");
  }
  EvalReport report;
  report.protocol = "cross_validate";
  report.train_polarity = report.test_polarity = manifest.polarity;
  report.config_echo = config.Describe();
  {
    std::set<std::string> present;
    for (const auto& r : manifest.records) present.insert(r.label);
    report.classes.assign(present.begin(), present.end());
  }
  if (report.classes.size() < 2) {
    Fail(ErrorKind::kTraining, "cross-validation needs at least 2 distortion classes");
  }

  report.trial_results.resize(config.trials);
  ParallelFor(static_cast<std::size_t>(config.trials), config.jobs, [&](std::size_t t) {
    TrialResult& trial = report.trial_results[t];
    trial.trial = static_cast<int>(t);
    ManifestSplit split;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= config.max_resamples) {
        Fail(ErrorKind::kTraining, "trial " + std::to_string(t) + ": no split with every class "
                                   "represented after " + std::to_string(attempt) + " attempts");
      }
      split = SplitByReference(manifest, config.train_fraction,
                               DeriveSeed(config.seed, RngStream::kSplit, t, attempt));
      std::map<std::string, int> counts;
      for (const auto& r : split.train.records) ++counts[r.label];
      const bool ok = std::all_of(report.classes.begin(), report.classes.end(),
                                  [&](const std::string& c) { return counts[c] >= 2; });
      if (ok && !split.test_rows.empty()) break;
      ++trial.resamples;
    }
    {
      std::set<std::string> train_refs;
      for (const auto& r : split.train.records) train_refs.insert(r.reference_id);
      for (const auto& r : split.test.records) {
        if (train_refs.count(r.reference_id)) {
          Fail(ErrorKind::kInternal, "reference '" + r.reference_id + "' on both sides of a split");
        }
      }
    }
    PipelineParams params;
    params.features = config.features;
    params.svm = config.svm;
    params.kind = config.kind;
    params.seed = DeriveSeed(config.seed, RngStream::kPlattFolds, t);
    const EniqaModel model = TrainEniqa(Samples(manifest, features, split.train_rows), params);
    ScoreTrial(model, manifest, features, split.test_rows, report.classes, trial);
  });
  Summarize(report);
  return report;
}

EvalReport CrossDatabase(const DatasetManifest& train, const std::vector<FeatureVector>& train_features,
                         const DatasetManifest& test, const std::vector<FeatureVector>& test_features,
                         const std::vector<std::string>& common_labels, const EvalConfig& config) {
  config.svm.Validate();
  if (train.records.empty() || test.records.empty()) {
    Fail(ErrorKind::kConfig, "cross-database evaluation needs two nonempty manifests");
  }
  if (train_features.size() != train.records.size() ||
      test_features.size() != test.records.size()) {
    Fail(ErrorKind::kArgument, "one feature vector per manifest record is required");
  }
  std::set<std::string> train_labels;
  std::set<std::string> test_labels;
  for (const auto& r : train.records) train_labels.insert(r.label);
  for (const auto& r : test.records) test_labels.insert(r.label);
  std::vector<std::string> common;
  for (const auto& l : std::set<std::string>(common_labels.begin(), common_labels.end())) {
    if (!train_labels.count(l) || !test_labels.count(l)) {
      Fail(ErrorKind::kConfig, "label '" + l + "' is not present in both manifests");
    }
    common.push_back(l);
  }
  if (common.empty()) Fail(ErrorKind::kConfig, "no common labels between the manifests");

  EvalReport report;
  report.protocol = "cross_database";
  report.train_polarity = train.polarity;
  report.test_polarity = test.polarity;
  report.config_echo = config.Describe() + " common_labels=" + [&] {
    std::string s;
    for (const auto& l : common) s += (s.empty() ? "" : ",") + l;
    return s;
  }();

  std::vector<std::size_t> all_train(train.records.size());
  std::iota(all_train.begin(), all_train.end(), 0);
  PipelineParams params;
  params.features = config.features;
  params.svm = config.svm;
  params.kind = config.kind;
  params.seed = DeriveSeed(config.seed, RngStream::kPlattFolds, 0);
  const EniqaModel model = TrainEniqa(Samples(train, train_features, all_train), params);
  report.classes = model.classes();

  std::vector<std::size_t> test_rows;
  const std::set<std::string> keep(common.begin(), common.end());
  for (std::size_t i = 0; i < test.records.size(); ++i) {
    if (keep.count(test.records[i].label)) test_rows.push_back(i);
  }
  TrialResult trial;
  ScoreTrial(model, test, test_features, test_rows, common, trial);
  report.trial_results.push_back(std::move(trial));
  Summarize(report);
  return report;
}

std::vector<WindowSize> DefaultSweepSizes() { return {{6, 6}, {8, 8}, {12, 12}, {16, 16}, {32, 32}}; }

std::vector<SweepRow> WindowSweep(const DatasetManifest& manifest,
                                  const std::vector<WindowSize>& sizes, const EvalConfig& config,
                                  const FeatureCache* cache) {
  std::vector<SweepRow> rows;
  for (const WindowSize& size : sizes) {
    EvalConfig sized = config;
    sized.features.window_rows = size.rows;
    sized.features.window_cols = size.cols;
    const ExtractionResult extracted =
        ExtractManifestFeatures(manifest, sized.features, cache, config.jobs, false);
    const EvalReport report = CrossValidate(manifest, extracted.features, sized);
    rows.push_back({size, report.overall.srocc, extracted.seconds_per_image});
  }
  return rows;
}

std::vector<GridRow> GridSearch(const DatasetManifest& manifest,
                                const std::vector<FeatureVector>& features,
                                const std::vector<double>& costs,
                                const std::vector<double>& gammas, const EvalConfig& config) {
  std::vector<GridRow> rows;
  for (const double c : costs) {
    for (const double g : gammas) {
      EvalConfig cell = config;
      cell.svm.c = c;
      cell.svm.gamma = g;
      const EvalReport report = CrossValidate(manifest, features, cell);
      rows.push_back({c, g, report.overall.srocc, report.overall.plcc, report.median_accuracy});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Output.

namespace {

std::string Fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string FormatReportText(const EvalReport& report) {
  std::ostringstream out;
  out << "protocol: " << report.protocol << "\n";
  out << "trials: " << report.trials;
  if (report.resampled_trials > 0) {
    out << " (" << report.resampled_trials << " trials resampled, " << report.total_resamples
        << " resamples for missing classes)";
  }
  out << "\n";
  out << "score polarity: train " << PolarityName(report.train_polarity) << ", test "
      << PolarityName(report.test_polarity)
      << (report.PolarityAligned() ? "" : " (opposite orientation: expect negative SROCC)")
      << "\n";
  out << "config: " << report.config_echo << "\n\n";
  out << "median over trials   SROCC    PLCC     RMSE     (trials)\n";
  for (const auto& [label, m] : report.per_class) {
    char line[160];
    std::snprintf(line, sizeof(line), "  %-18s %-8s %-8s %-8s (%d)\n", label.c_str(),
                  Fixed(m.srocc).c_str(), Fixed(m.plcc).c_str(), Fixed(m.rmse).c_str(),
                  m.samples);
    out << line;
  }
  {
    char line[160];
    std::snprintf(line, sizeof(line), "  %-18s %-8s %-8s %-8s (%d)\n", "ALL",
                  Fixed(report.overall.srocc).c_str(), Fixed(report.overall.plcc).c_str(),
                  Fixed(report.overall.rmse).c_str(), report.overall.samples);
    out << line;
  }
  out << "\nclassification accuracy (%): mean " << Fixed(100.0 * report.confusion.mean_accuracy)
      << ", median " << Fixed(100.0 * report.median_accuracy) << "\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    out << "  " << report.classes[i] << ": "
        << Fixed(100.0 * report.confusion.per_class_accuracy[i]) << "\n";
  }
  out << "\nconfusion matrix (rows: true class, columns: predicted; mean over trials)\n";
  out << "  " << std::string(8, ' ');
  for (const auto& c : report.classes) {
    char cell[32];
    std::snprintf(cell, sizeof(cell), " %8s", c.c_str());
    out << cell;
  }
  out << "\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    char head[32];
    std::snprintf(head, sizeof(head), "  %-8s", report.classes[i].c_str());
    out << head;
    for (std::size_t j = 0; j < report.classes.size(); ++j) {
      char cell[32];
      std::snprintf(cell, sizeof(cell), " %8s",
                    report.confusion.row_support[i] ? Fixed(report.confusion.matrix[i][j]).c_str()
                                                    : "-");
      out << cell;
    }
    out << "\n";
  }
  out << "\nlogistic (last trial):";
  for (const double b : report.final_logistic.beta) out << ' ' << FormatDouble(b);
  out << "\n";
  return out.str();
}

std::string FormatReportCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "scope,srocc,plcc,rmse,accuracy,trials\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto it = report.per_class.find(report.classes[i]);
    if (it == report.per_class.end()) continue;
    const MetricMedians& m = it->second;
    out << report.classes[i] << ',' << FormatDouble(m.srocc) << ',' << FormatDouble(m.plcc)
        << ',' << FormatDouble(m.rmse) << ','
        << FormatDouble(report.confusion.per_class_accuracy[i]) << ',' << m.samples << "\n";
  }
  out << "ALL," << FormatDouble(report.overall.srocc) << ',' << FormatDouble(report.overall.plcc)
      << ',' << FormatDouble(report.overall.rmse) << ','
      << FormatDouble(report.confusion.mean_accuracy) << ',' << report.overall.samples << "\n";
  return out.str();
}

std::string FormatConfusionCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "true";
  for (const auto& c : report.classes) out << ',' << c;
  out << "\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    out << report.classes[i];
    for (std::size_t j = 0; j < report.classes.size(); ++j) {
      out << ',' << FormatDouble(report.confusion.row_support[i] ? report.confusion.matrix[i][j]
                                                                 : kNaN);
    }
    out << "\n";
  }
  return out.str();
}

std::string FormatTrialsCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "trial,resamples,test_size,srocc,plcc,rmse,accuracy";
  std::vector<std::string> labels;
  if (!report.trial_results.empty()) {
    for (const auto& [label, m] : report.trial_results.front().per_class) labels.push_back(label);
  }
  for (const auto& l : labels) out << ",srocc_" << l;
  out << "\n";
  for (const auto& t : report.trial_results) {
    out << t.trial << ',' << t.resamples << ',' << t.test_size << ','
        << FormatDouble(t.overall.srocc) << ',' << FormatDouble(t.overall.plcc) << ','
        << FormatDouble(t.overall.rmse) << ',' << FormatDouble(t.accuracy);
    for (const auto& l : labels) out << ',' << FormatDouble(t.per_class.at(l).srocc);
    out << "\n";
  }
  return out.str();
}

std::string FormatSweepCsv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "window,srocc,seconds_per_image\n";
  for (const auto& r : rows) {
    out << r.window.rows << 'x' << r.window.cols << ',' << FormatDouble(r.srocc) << ','
        << FormatDouble(r.seconds_per_image) << "\n";
  }
  return out.str();
}

std::string FormatGridCsv(const std::vector<GridRow>& rows) {
  std::ostringstream out;
  out << "c,gamma,srocc,plcc,accuracy\n";
  for (const auto& r : rows) {
    out << FormatDouble(r.c) << ',' << FormatDouble(r.gamma) << ',' << FormatDouble(r.srocc)
        << ',' << FormatDouble(r.plcc) << ',' << FormatDouble(r.accuracy) << "\n";
  }
  return out.str();
}

}  // namespace eniqa
