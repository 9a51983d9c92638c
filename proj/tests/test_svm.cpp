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

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "eniqa/error.hpp"
#include "eniqa/rng.hpp"
#include "eniqa/svm.hpp"

namespace eniqa {
namespace {

struct Blobs {
  Matrix x;
  std::vector<std::string> labels;
};

Blobs MakeBlobs(const std::vector<std::vector<double>>& centers, double sigma, int per_class,
                std::uint64_t seed) {
  Rng rng(seed);
  Blobs b;
  const char* names[] = {"A", "B", "C", "D"};
  for (int i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < centers.size(); ++c) {
      std::vector<double> p = centers[c];
      for (double& v : p) v += sigma * rng.Normal();
      b.x.push_back(p);
      b.labels.push_back(names[c]);
    }
  }
  return b;
}

SvmParams Params(double c, double gamma) {
  SvmParams p;
  p.c = c;
  p.gamma = gamma;
  return p;
}

TEST(RbfKernel, Examples) {
  const std::vector<double> x = {0.3, -1.2};
  EXPECT_EQ(RbfKernel(x, x, 5.0), 1.0);
  const std::vector<double> y = {0.3 + std::sqrt(std::log(2.0)), -1.2};
  EXPECT_NEAR(RbfKernel(x, y, 1.0), 0.5, 1e-15);
  const double far = RbfKernel(std::vector<double>{0.0}, std::vector<double>{1.0}, 700.0);
  EXPECT_GT(far, 0.0);
  EXPECT_LT(far, 1e-300);
  EXPECT_THROW(RbfKernel(x, std::vector<double>{1.0}, 1.0), Error);
}

TEST(Scaler, EndpointsMidpointAndConstantColumn) {
  const Matrix rows = {{1.0, 5.0, -2.0}, {3.0, 5.0, 6.0}};
  const ScaleParams p = FitScaler(rows);
  EXPECT_EQ(ApplyScaler(p, rows[0]), (std::vector<double>{-1.0, 0.0, -1.0}));
  EXPECT_EQ(ApplyScaler(p, rows[1]), (std::vector<double>{1.0, 0.0, 1.0}));
  EXPECT_EQ(ApplyScaler(p, std::vector<double>{2.0, 9.0, 2.0}),
            (std::vector<double>{0.0, 0.0, 0.0}));
  // No clipping outside the training range.
  EXPECT_DOUBLE_EQ(ApplyScaler(p, std::vector<double>{5.0, 5.0, 6.0})[0], 3.0);
}

TEST(Svc, SeparatedBlobsTrainPerfectly) {
  const Blobs b = MakeBlobs({{0.0, 0.0}, {3.0, 0.0}}, 0.1, 30, 1);
  std::vector<SolverStats> stats;
  const SvcModel m = TrainSvc(b.x, b.labels, Params(1.0, 1.0), 7, &stats);
  for (std::size_t i = 0; i < b.x.size(); ++i) {
    EXPECT_EQ(m.classes[PredictClass(m, b.x[i])], b.labels[i]);
  }
  for (const auto& s : stats) EXPECT_TRUE(s.objective_monotone);
}

TEST(Svc, DualsSatisfyConstraints) {
  const Blobs b = MakeBlobs({{0.0, 0.0}, {1.0, 0.5}, {0.2, 1.0}}, 0.4, 20, 2);
  const double c = 2.0;
  const SvcModel m = TrainSvc(b.x, b.labels, Params(c, 1.5), 3);
  ASSERT_EQ(m.pairs.size(), 3u);
  for (const auto& pair : m.pairs) {
    double sum = 0.0;
    for (const double a : pair.coef) {
      EXPECT_LE(std::abs(a), c + 1e-12);
      sum += a;
    }
    EXPECT_NEAR(sum, 0.0, 1e-9);
  }
}

TEST(Svc, DuplicatedDataKeepsProbeLabels) {
  Blobs b = MakeBlobs({{0.0, 0.0}, {3.0, 0.0}}, 0.1, 15, 4);
  const SvcModel once = TrainSvc(b.x, b.labels, Params(1.0, 1.0), 5);
  Blobs twice = b;
  twice.x.insert(twice.x.end(), b.x.begin(), b.x.end());
  twice.labels.insert(twice.labels.end(), b.labels.begin(), b.labels.end());
  const SvcModel doubled = TrainSvc(twice.x, twice.labels, Params(1.0, 1.0), 5);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const std::vector<double> probe = {-1.0 + 5.0 * i / 9.0, -1.5 + 3.0 * j / 9.0};
      EXPECT_EQ(PredictClass(once, probe), PredictClass(doubled, probe));
    }
  }
}

TEST(Svc, PlattFavorsTrueClassOnSeparatedData) {
  std::vector<double> decisions;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    decisions.push_back(1.0 + 0.1 * i);
    labels.push_back(1);
    decisions.push_back(-1.0 - 0.1 * i);
    labels.push_back(-1);
  }
  double a = 0.0;
  double b = 0.0;
  FitPlattSigmoid(decisions, labels, &a, &b);
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const double p_positive = 1.0 / (1.0 + std::exp(a * decisions[i] + b));
    EXPECT_GT(labels[i] > 0 ? p_positive : 1.0 - p_positive, 0.5);
  }
}

TEST(Svc, ProbabilitiesLieOnSimplex) {
  const Blobs b = MakeBlobs({{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}, {2.0, 2.0}}, 0.5, 15, 6);
  const SvcModel m = TrainSvc(b.x, b.labels, Params(4.0, 0.7), 8);
  Rng rng(9);
  for (int t = 0; t < 10000; ++t) {
    const std::vector<double> probe = {rng.Uniform() * 8 - 3, rng.Uniform() * 8 - 3};
    const auto p = PredictProba(m, probe);
    ASSERT_EQ(p.size(), 4u);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    for (const double v : p) EXPECT_GE(v, 0.0);
  }
}

TEST(Svc, FarInsideBlobPredictsThatBlob) {
  const Blobs b = MakeBlobs({{0.0, 0.0}, {3.0, 0.0}}, 0.1, 30, 10);
  const SvcModel m = TrainSvc(b.x, b.labels, Params(1.0, 1.0), 11);
  EXPECT_EQ(m.classes[PredictClass(m, std::vector<double>{-0.05, 0.02})], "A");
  EXPECT_EQ(m.classes[PredictClass(m, std::vector<double>{3.02, -0.01})], "B");
}

TEST(Svc, TwoClassCouplingIsPairSigmoid) {
  const Blobs b = MakeBlobs({{0.0, 0.0}, {1.0, 0.0}}, 0.6, 25, 12);
  const SvcModel m = TrainSvc(b.x, b.labels, Params(1.0, 1.0), 13);
  ASSERT_EQ(m.pairs.size(), 1u);
  for (double x0 = -1.0; x0 <= 2.0; x0 += 0.25) {
    const std::vector<double> probe = {x0, 0.1};
    const auto p = PredictProba(m, probe);
    const double sigmoid = m.pairs[0].PositiveProbability(m.pairs[0].Decision(probe, m.gamma));
    const double clamped = std::min(std::max(sigmoid, 1e-7), 1.0 - 1e-7);
    EXPECT_NEAR(p[m.pairs[0].positive], clamped, 1e-12);
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
  }
}

TEST(Svc, CouplingMatchesConsistentPairwiseProbabilities) {
  const std::vector<double> truth = {0.5, 0.3, 0.2};
  Matrix r(3, std::vector<double>(3, 0.0));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) r[i][j] = truth[i] / (truth[i] + truth[j]);
    }
  }
  const auto p = CouplePairwise(r);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], truth[i], 1e-9);
}

TEST(Svc, DegenerateTrainingSetsAreRejected) {
  const Matrix x = {{0.0}, {1.0}, {2.0}};
  try {
    TrainSvc(x, {"A", "A", "A"}, SvmParams{}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTraining);
  }
  EXPECT_THROW(TrainSvc(x, {"A", "A", "B"}, SvmParams{}, 0), Error);
}

TEST(Svc, DeterministicGivenSeed) {
  const Blobs b = MakeBlobs({{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}}, 0.5, 20, 14);
  EXPECT_EQ(SerializeSvc(TrainSvc(b.x, b.labels, Params(1.0, 1.0), 15)),
            SerializeSvc(TrainSvc(b.x, b.labels, Params(1.0, 1.0), 15)));
}

TEST(Svr, LinearFunctionFit) {
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 200; ++i) {
    const double v = i / 199.0;
    x.push_back({v});
    y.push_back(2 * v + 1);
  }
  SvmParams p = Params(100.0, 10.0);
  p.epsilon = 0.01;
  SolverStats stats;
  const SvrModel m = TrainSvr(x, y, p, &stats);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(PredictSvr(m, x[i]) - y[i]));
  EXPECT_LE(worst, 0.05);
  EXPECT_TRUE(stats.objective_monotone);
  double sum = 0.0;
  for (const double c : m.coef) {
    EXPECT_LE(std::abs(c), 100.0 + 1e-9);
    sum += c;
  }
  EXPECT_NEAR(sum, 0.0, 1e-9);
}

TEST(Svr, ConstantTargetStaysInTube) {
  Rng rng(16);
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 30; ++i) {
    x.push_back({rng.Uniform(), rng.Uniform()});
    y.push_back(4.25);
  }
  const SvrModel m = TrainSvr(x, y, SvmParams{});
  for (const auto& row : x) EXPECT_NEAR(PredictSvr(m, row), 4.25, 0.1 + 1e-12);
}

TEST(Svr, InterpolatesWithZeroEpsilon) {
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 15; ++i) {
    x.push_back({i / 14.0});
    y.push_back(std::sin(4.0 * i / 14.0));
  }
  SvmParams p = Params(1e4, 20.0);
  p.epsilon = 0.0;
  const SvrModel m = TrainSvr(x, y, p);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(PredictSvr(m, x[i]), y[i], 1e-3);
}

TEST(Svr, PredictionIsContinuous) {
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 50; ++i) {
    x.push_back({i / 49.0, 1.0 - i / 49.0});
    y.push_back(i % 7);
  }
  const SvrModel m = TrainSvr(x, y, Params(10.0, 3.0));
  for (double t = 0.0; t < 1.0; t += 0.1) {
    const std::vector<double> a = {t, 0.3};
    const std::vector<double> b = {t + 1e-9, 0.3};
    EXPECT_LT(std::abs(PredictSvr(m, a) - PredictSvr(m, b)), 1e-6);
  }
}

TEST(Serialization, SvcRoundTripIsBitExact) {
  const Blobs b = MakeBlobs({{0.0, 0.0}, {3.0, 0.0}}, 0.1, 20, 17);
  const SvcModel m = TrainSvc(b.x, b.labels, Params(1.0, 1.0), 18);
  const SvcModel back = DeserializeSvc(SerializeSvc(m));
  Rng rng(19);
  for (int t = 0; t < 100; ++t) {
    const std::vector<double> probe = {rng.Uniform() * 5 - 1, rng.Uniform() * 2 - 1};
    const auto p = PredictProba(m, probe);
    const auto q = PredictProba(back, probe);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], q[i]);
  }
  EXPECT_EQ(SerializeSvc(back), SerializeSvc(m));
}

TEST(Serialization, SvrRoundTripIsBitExact) {
  Matrix x;
  std::vector<double> y;
  for (int i = 0; i < 40; ++i) {
    x.push_back({i / 39.0});
    y.push_back(std::exp(i / 39.0) / 3.0);
  }
  const SvrModel m = TrainSvr(x, y, Params(10.0, 2.0));
  const SvrModel back = DeserializeSvr(SerializeSvr(m));
  for (double t = -0.5; t < 1.5; t += 0.01) {
    const std::vector<double> probe = {t};
    EXPECT_EQ(PredictSvr(m, probe), PredictSvr(back, probe));
  }
}

std::string ParseErrorOf(const std::string& text) {
  try {
    DeserializeSvc(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    return e.what();
  }
  ADD_FAILURE() << "no parse error";
  return "";
}

TEST(Serialization, ParseErrors) {
  EXPECT_NE(ParseErrorOf("").find("missing header"), std::string::npos);
  EXPECT_NE(ParseErrorOf("ENIQA-MODEL v7\n").find("v7"), std::string::npos);
  const Blobs b = MakeBlobs({{0.0, 0.0}, {3.0, 0.0}}, 0.1, 5, 20);
  const std::string text = SerializeSvc(TrainSvc(b.x, b.labels, Params(1.0, 1.0), 21));
  const std::string truncated = text.substr(0, text.size() / 2);
  EXPECT_NE(ParseErrorOf(truncated).find("line"), std::string::npos);
}

}  // namespace
}  // namespace eniqa
