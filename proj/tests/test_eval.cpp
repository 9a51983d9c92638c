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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "eniqa/dataset.hpp"
#include "eniqa/error.hpp"
#include "eniqa/eval.hpp"
#include "eniqa/image.hpp"
#include "eniqa/rng.hpp"
#include "oracles.hpp"

namespace eniqa {
namespace {

const std::string kDataDir = ENIQA_TEST_DATA_DIR;

std::vector<double> RandomVector(Rng& rng, std::size_t n, bool ties) {
  std::vector<double> v(n);
  for (auto& x : v) x = ties ? static_cast<double>(rng.UniformInt(5)) : rng.Normal();
  return v;
}

TEST(AverageRanks, TiesShareMeanRank) {
  const std::vector<double> v = {3.0, 1.0, 3.0, 2.0, 3.0};
  EXPECT_EQ(AverageRanks(v), (std::vector<double>{4.0, 1.0, 4.0, 2.0, 4.0}));
}

TEST(Srocc, KnownValues) {
  const std::vector<double> a = {1, 2, 2, 3};
  const std::vector<double> b = {1, 2, 3, 4};
  EXPECT_NEAR(Srocc(a, b), 0.9487, 1e-4);
  const std::vector<double> inc = {1, 5, 7, 100};
  const std::vector<double> dec = {9, 3, 1, -4};
  EXPECT_DOUBLE_EQ(Srocc(b, inc), 1.0);
  EXPECT_DOUBLE_EQ(Srocc(b, dec), -1.0);
}

TEST(Srocc, MatchesRankOracle) {
  Rng rng(DeriveSeed(3, RngStream::kTest, 0, 0));
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.UniformInt(40);
    const auto a = RandomVector(rng, n, t % 2 == 0);
    auto b = RandomVector(rng, n, t % 3 == 0);
    if (std::all_of(a.begin(), a.end(), [&](double x) { return x == a[0]; }) ||
        std::all_of(b.begin(), b.end(), [&](double x) { return x == b[0]; })) {
      continue;
    }
    const double s = Srocc(a, b);
    EXPECT_NEAR(s, oracle::Srocc(a, b), 1e-12);
    EXPECT_LE(std::abs(s), 1.0);
    EXPECT_NEAR(Srocc(b, a), s, 1e-12);
  }
}

TEST(Srocc, InvariantUnderMonotoneTransforms) {
  Rng rng(DeriveSeed(4, RngStream::kTest, 0, 0));
  const auto a = RandomVector(rng, 50, false);
  const auto b = RandomVector(rng, 50, false);
  std::vector<double> ta(a.size());
  std::transform(a.begin(), a.end(), ta.begin(), [](double x) { return std::exp(x) * 3 + 1; });
  EXPECT_NEAR(Srocc(ta, b), Srocc(a, b), 1e-12);
  std::transform(a.begin(), a.end(), ta.begin(), [](double x) { return -x * x * x; });
  EXPECT_NEAR(Srocc(ta, b), -Srocc(a, b), 1e-12);
}

TEST(Srocc, Errors) {
  const std::vector<double> two = {1, 2};
  const std::vector<double> three = {1, 2, 3};
  const std::vector<double> flat = {2, 2, 2};
  EXPECT_THROW(Srocc(two, two), Error);
  EXPECT_THROW(Srocc(three, two), Error);
  EXPECT_THROW(Srocc(three, flat), Error);
}

TEST(Pearson, MatchesOracle) {
  Rng rng(DeriveSeed(5, RngStream::kTest, 0, 0));
  for (int t = 0; t < 200; ++t) {
    const auto a = RandomVector(rng, 30, false);
    const auto b = RandomVector(rng, 30, false);
    EXPECT_NEAR(Pearson(a, b), oracle::Pearson(a, b), 1e-12);
  }
}

TEST(NelderMead, MinimisesRosenbrock) {
  const auto f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const NelderMeadResult r = NelderMead(f, {-1.2, 1.0}, {0.5, 0.5});
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
  EXPECT_LT(r.value, 1e-8);
}

TEST(Logistic, EvaluateMatchesOracle) {
  const LogisticParams p{{10.0, 0.5, 0.0, 1.0, 2.0}};
  for (double z = -10; z <= 10; z += 0.37) {
    EXPECT_NEAR(p.Evaluate(z), oracle::Logistic5(p.beta.data(), z), 1e-12);
  }
}

TEST(FitLogistic5, LinearDataFitsExactly) {
  std::vector<double> z;
  std::vector<double> y;
  for (int i = 0; i < 60; ++i) {
    z.push_back(i * 0.5);
    y.push_back(3.0 * i * 0.5 - 7.0);
  }
  const CorrelationMetrics m = PlccRmse(z, y);
  EXPECT_LT(m.rmse, 1e-6);
  EXPECT_NEAR(m.plcc, 1.0, 1e-9);
}

TEST(FitLogistic5, RecoversGeneratingCurve) {
  const LogisticParams truth{{10.0, 0.5, 0.0, 1.0, 2.0}};
  std::vector<double> z;
  std::vector<double> y;
  for (int i = 0; i <= 200; ++i) {
    z.push_back(-10.0 + 0.1 * i);
    y.push_back(truth.Evaluate(z.back()));
  }
  const LogisticFit fit = FitLogistic5(z, y);
  EXPECT_LT(std::sqrt(fit.sse / static_cast<double>(z.size())), 1e-4);
  EXPECT_LE(fit.sse, fit.initial_sse);
}

TEST(FitLogistic5, NeverWorseThanInitialGuess) {
  Rng rng(DeriveSeed(6, RngStream::kTest, 0, 0));
  for (int t = 0; t < 20; ++t) {
    std::vector<double> z;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
      z.push_back(rng.Uniform() * 10.0);
      y.push_back(5.0 * std::tanh(z.back() - 5.0) + rng.Normal());
    }
    const LogisticFit fit = FitLogistic5(z, y);
    EXPECT_LE(fit.sse, fit.initial_sse);
    EXPECT_TRUE(std::isfinite(fit.sse));
  }
}

TEST(FitLogistic5, ConstantPredictorIsRejected) {
  const std::vector<double> z(10, 4.0);
  const std::vector<double> y = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_THROW(FitLogistic5(z, y), Error);
}

TEST(PlccRmse, CubicRelationIsLinearised) {
  std::vector<double> z;
  std::vector<double> y;
  for (int i = 0; i < 80; ++i) {
    z.push_back(-2.0 + i * 0.05);
    y.push_back(std::pow(z.back(), 3));
  }
  const CorrelationMetrics m = PlccRmse(z, y);
  EXPECT_GT(m.plcc, Pearson(z, y));
  EXPECT_GT(m.plcc, 0.99);
}

TEST(PlccRmse, UnrelatedDataHasLowCorrelation) {
  Rng rng(DeriveSeed(7, RngStream::kTest, 0, 0));
  const auto z = RandomVector(rng, 2000, false);
  const auto y = RandomVector(rng, 2000, false);
  EXPECT_LT(std::abs(PlccRmse(z, y).plcc), 0.15);
}

TEST(PlccRmse, RmseScalesWithSubjectiveScale) {
  Rng rng(DeriveSeed(8, RngStream::kTest, 0, 0));
  std::vector<double> z;
  std::vector<double> y;
  for (int i = 0; i < 100; ++i) {
    z.push_back(rng.Uniform());
    y.push_back(2.0 * z.back() + 0.2 * rng.Normal());
  }
  std::vector<double> y10 = y;
  for (auto& v : y10) v *= 10.0;
  const CorrelationMetrics a = PlccRmse(z, y);
  const CorrelationMetrics b = PlccRmse(z, y10);
  EXPECT_NEAR(b.rmse, 10.0 * a.rmse, 1e-3 * b.rmse);
  EXPECT_NEAR(b.plcc, a.plcc, 1e-6);
}

// Manifest whose feature vectors are synthetic: each label has its own
// centre and the score tracks one feature.
struct SyntheticData {
  DatasetManifest manifest;
  std::vector<FeatureVector> features;
};

SyntheticData MakeData(int refs, const std::vector<std::string>& labels, std::uint64_t seed,
                       ScorePolarity polarity = ScorePolarity::kHigherIsWorse) {
  std::ostringstream text;
  text << "# polarity=" << PolarityName(polarity) << "\npath,label,score,reference_id\n";
  Rng rng(DeriveSeed(seed, RngStream::kTest, 0, 0));
  SyntheticData data;
  int row = 0;
  for (int r = 0; r < refs; ++r) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
      for (int level = 0; level < 4; ++level) {
        const double score = 10.0 * level + rng.Normal();
        text << "img" << row++ << ".ppm," << labels[k] << "," << score << ",ref" << r << "\n";
        FeatureVector f;
        for (int j = 0; j < kNumFeatures; ++j) {
          f.values[j] = (j % labels.size() == k ? 1.5 : 0.0) + 0.2 * rng.Normal();
        }
        f.values[kNumFeatures - 1] = level + 0.1 * rng.Normal();
        data.features.push_back(f);
      }
    }
  }
  data.manifest = ParseManifestText(text.str(), "/synthetic");
  return data;
}

EvalConfig FastConfig(int trials) {
  EvalConfig c;
  c.trials = trials;
  c.seed = 5;
  c.svm.c = 10.0;
  c.svm.gamma = 0.05;
  return c;
}

TEST(CrossValidate, LearnsSyntheticStructure) {
  const SyntheticData d = MakeData(10, {"GBLUR", "JPEG", "WN"}, 1);
  const EvalReport report = CrossValidate(d.manifest, d.features, FastConfig(8));
  EXPECT_EQ(report.trials, 8);
  EXPECT_EQ(report.trial_results.size(), 8u);
  EXPECT_GT(report.overall.srocc, 0.8);
  EXPECT_GT(report.median_accuracy, 0.9);
  EXPECT_EQ(report.classes, (std::vector<std::string>{"GBLUR", "JPEG", "WN"}));
  EXPECT_EQ(report.per_class.size(), 3u);
  EXPECT_NO_THROW(report.CheckInvariants());
  for (const auto& t : report.trial_results) {
    EXPECT_EQ(t.test_size, t.true_class.size());
    EXPECT_EQ(t.test_size, 2u * 3u * 4u);  // 2 of 10 references held out
  }
}

TEST(CrossValidate, DeterministicForSeed) {
  const SyntheticData d = MakeData(6, {"WN", "GBLUR"}, 2);
  EvalConfig config = FastConfig(4);
  const EvalReport a = CrossValidate(d.manifest, d.features, config);
  config.jobs = 3;
  const EvalReport b = CrossValidate(d.manifest, d.features, config);
  EXPECT_EQ(FormatTrialsCsv(a), FormatTrialsCsv(b));
  EXPECT_EQ(FormatReportCsv(a), FormatReportCsv(b));
  config.seed = 6;
  EXPECT_NE(FormatTrialsCsv(CrossValidate(d.manifest, d.features, config)), FormatTrialsCsv(a));
}

TEST(CrossValidate, ConfigErrors) {
  const SyntheticData d = MakeData(6, {"WN", "GBLUR"}, 3);
  for (const double fraction : {0.0, 1.0, -0.5}) {
    EvalConfig config = FastConfig(2);
    config.train_fraction = fraction;
    try {
      CrossValidate(d.manifest, d.features, config);
      FAIL() << fraction;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    }
  }
  EvalConfig config = FastConfig(0);
  EXPECT_THROW(CrossValidate(d.manifest, d.features, config), Error);
  std::vector<FeatureVector> short_features(d.features.begin(), d.features.end() - 1);
  EXPECT_THROW(CrossValidate(d.manifest, short_features, FastConfig(2)), Error);
}

TEST(ConfusionMatrix, PerfectClassifierGivesIdentity) {
  std::vector<TrialResult> trials(3);
  for (auto& t : trials) {
    t.true_class = {0, 1, 2, 2, 1};
    t.predicted_class = t.true_class;
    t.accuracy = 1.0;
  }
  trials[2].true_class = {0, 2};  // class 1 absent from this trial
  trials[2].predicted_class = {0, 2};
  const ConfusionResult c = ConfusionMatrix(trials, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(c.matrix[i][j], i == j ? 1.0 : 0.0);
  }
  EXPECT_EQ(c.row_support, (std::vector<int>{3, 2, 3}));
  EXPECT_DOUBLE_EQ(c.mean_accuracy, 1.0);
}

TEST(ConfusionMatrix, RowsSumToOne) {
  std::vector<TrialResult> trials(2);
  trials[0].true_class = {0, 0, 0, 1};
  trials[0].predicted_class = {0, 1, 1, 1};
  trials[1].true_class = {0, 1};
  trials[1].predicted_class = {0, 0};
  const ConfusionResult c = ConfusionMatrix(trials, 2);
  EXPECT_NEAR(c.matrix[0][0], (1.0 / 3.0 + 1.0) / 2.0, 1e-12);
  EXPECT_NEAR(c.matrix[1][0], 0.5, 1e-12);
  for (const auto& row : c.matrix) EXPECT_NEAR(row[0] + row[1], 1.0, 1e-12);
}

TEST(CrossDatabase, TrainsOnOneTestsOnOther) {
  const SyntheticData train = MakeData(8, {"GBLUR", "JPEG", "WN", "FF"}, 4);
  const SyntheticData test = MakeData(5, {"GBLUR", "JPEG", "WN", "CA"}, 5);
  const EvalReport r = CrossDatabase(train.manifest, train.features, test.manifest, test.features,
                                     {"GBLUR", "JPEG", "WN"}, FastConfig(1));
  EXPECT_EQ(r.protocol, "cross_database");
  EXPECT_EQ(r.classes.size(), 4u);  // the model keeps every training class
  EXPECT_GT(r.overall.srocc, 0.8);
  ASSERT_EQ(r.trial_results.size(), 1u);
  EXPECT_EQ(r.trial_results[0].test_size, 5u * 3u * 4u);
  EXPECT_TRUE(r.PolarityAligned());
}

TEST(CrossDatabase, LabelsMustExistInBoth) {
  const SyntheticData train = MakeData(4, {"GBLUR", "WN"}, 6);
  const SyntheticData test = MakeData(4, {"GBLUR", "JPEG"}, 7);
  for (const std::vector<std::string>& labels :
       {std::vector<std::string>{"GBLUR", "WN"}, std::vector<std::string>{}}) {
    try {
      CrossDatabase(train.manifest, train.features, test.manifest, test.features, labels,
                    FastConfig(1));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    }
  }
}

TEST(GridSearch, OneRowPerPair) {
  const SyntheticData d = MakeData(6, {"WN", "GBLUR"}, 8);
  const auto rows = GridSearch(d.manifest, d.features, {1.0, 10.0}, {0.01, 0.1, 1.0}, FastConfig(2));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].c, 1.0);
  EXPECT_EQ(rows[0].gamma, 0.01);
  const std::string csv = FormatGridCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "c,gamma,srocc,plcc,accuracy");
}

TEST(Formatting, ReportTables) {
  const SyntheticData d = MakeData(6, {"WN", "GBLUR"}, 9);
  const EvalReport r = CrossValidate(d.manifest, d.features, FastConfig(3));
  const std::string csv = FormatReportCsv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "scope,srocc,plcc,rmse,accuracy,trials");
  EXPECT_NE(csv.find("\nALL,"), std::string::npos);
  EXPECT_NE(csv.find("\nWN,"), std::string::npos);
  const std::string trials = FormatTrialsCsv(r);
  EXPECT_EQ(std::count(trials.begin(), trials.end(), '\n'), 4);
  const std::string text = FormatReportText(r);
  EXPECT_NE(text.find("SROCC"), std::string::npos);
  const std::string confusion = FormatConfusionCsv(r);
  EXPECT_EQ(std::count(confusion.begin(), confusion.end(), '\n'), 3);
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("eniqa_eval_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

TEST(FeatureCache, RoundTripAndKeying) {
  TempDir dir;
  const FeatureCache cache(dir.str() + "/cache");
  const std::vector<std::uint8_t> bytes = {1, 2, 3};
  const FeatureConfig config;
  const std::string key = FeatureCache::Key(bytes, config);
  EXPECT_FALSE(cache.Lookup(key).has_value());
  FeatureVector f;
  for (int i = 0; i < kNumFeatures; ++i) f.values[i] = std::sqrt(i + 0.1) * 1e-3;
  cache.Store(key, f);
  const auto back = cache.Lookup(key);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, f);

  FeatureConfig other = config;
  other.keep_fraction = 0.5;
  EXPECT_NE(FeatureCache::Key(bytes, other), key);
  const std::vector<std::uint8_t> more = {1, 2, 4};
  EXPECT_NE(FeatureCache::Key(more, config), key);
}

TEST(ExtractManifestFeatures, CachedRunMatchesAndReportsFailures) {
  TempDir dir;
  std::ostringstream text;
  text << "# polarity=DMOS\npath,label,score,reference_id\n"
       << kDataDir << "/chelsea.ppm,WN,1,a\n"
       << dir.str() << "/missing.ppm,WN,2,b\n";
  const DatasetManifest m = ParseManifestText(text.str(), "/");
  const FeatureCache cache(dir.str() + "/cache");
  const FeatureConfig config;
  const ExtractionResult first = ExtractManifestFeatures(m, config, &cache, 2, true);
  ASSERT_EQ(first.features.size(), 2u);
  EXPECT_TRUE(first.errors[0].empty());
  EXPECT_FALSE(first.errors[1].empty());
  EXPECT_EQ(first.cache_hits, 0u);
  EXPECT_EQ(first.features[0], ExtractFeatures(LoadImage(kDataDir + "/chelsea.ppm"), config));

  const ExtractionResult second = ExtractManifestFeatures(m, config, &cache, 1, true);
  EXPECT_EQ(second.cache_hits, 1u);
  EXPECT_EQ(second.features[0], first.features[0]);
  EXPECT_THROW(ExtractManifestFeatures(m, config, &cache, 1, false), Error);
}

TEST(WindowSweep, OneRowPerSize) {
  // Two references, two labels, three blur levels each: enough for a
  // single-trial sweep while staying quick.
  TempDir dir;
  std::ostringstream text;
  text << "# polarity=DMOS\npath,label,score,reference_id\n";
  int row = 0;
  for (const std::string name : {"astronaut", "chelsea", "coffee"}) {
    const RgbImage img = LoadImage(kDataDir + "/" + name + ".ppm");
    for (int level = 1; level <= 3; ++level) {
      for (const auto kind : {DistortionKind::kWhiteNoise, DistortionKind::kGaussianBlur}) {
        const double amount = kind == DistortionKind::kWhiteNoise ? 8.0 * level : 1.0 * level;
        const std::string path = dir.str() + "/" + std::to_string(row++) + ".ppm";
        SaveImage(SynthDistort(img, kind, amount, row), path);
        text << path << "," << DistortionLabel(kind) << "," << level << "," << name << "\n";
      }
    }
  }
  const DatasetManifest m = ParseManifestText(text.str(), "/");
  EvalConfig config = FastConfig(1);
  config.train_fraction = 0.6;
  const auto rows = WindowSweep(m, {{16, 16}, {32, 24}}, config, nullptr);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].window.rows, 32);
  EXPECT_EQ(rows[1].window.cols, 24);
  for (const auto& r : rows) EXPECT_GT(r.seconds_per_image, 0.0);
  const std::string csv = FormatSweepCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "window,srocc,seconds_per_image");
  EXPECT_NE(csv.find("32x24"), std::string::npos);
  EXPECT_FALSE(DefaultSweepSizes().empty());
}

}  // namespace
}  // namespace eniqa
