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

// RBF-kernel support vector machines trained by SMO: probabilistic
// one-vs-one C-SVC (Platt sigmoids + pairwise coupling) and epsilon-SVR.
// Also the [-1, 1] feature scaler and the text model format sections.

#ifndef ENIQA_SVM_HPP_
#define ENIQA_SVM_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace eniqa {

using Matrix = std::vector<std::vector<double>>;

inline constexpr const char* kModelHeader = "ENIQA-MODEL v1";

struct SvmParams {
  double c = 1e-4;
  double gamma = 1e-4;
  double epsilon = 0.1;     // SVR tube width
  double tolerance = 1e-3;  // KKT stopping tolerance
  int platt_folds = 5;

  void Validate() const;
};

double RbfKernel(std::span<const double> x, std::span<const double> y, double gamma);

struct ScaleParams {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dims() const { return min.size(); }
};

ScaleParams FitScaler(const Matrix& rows);

// -1 + 2 (x - min) / (max - min); constant columns map to 0. No clipping.
std::vector<double> ApplyScaler(const ScaleParams& params, std::span<const double> x);

struct SolverStats {
  long iterations = 0;
  double objective = 0.0;
  bool objective_monotone = true;
};

// One one-vs-one machine. Positive decision values favor `positive`.
struct PairMachine {
  int positive = 0;
  int negative = 0;
  Matrix support_vectors;
  std::vector<double> coef;  // alpha_i * y_i
  double rho = 0.0;
  double platt_a = 0.0;
  double platt_b = 0.0;

  double Decision(std::span<const double> x, double gamma) const;
  // P(positive | x) from the Platt sigmoid 1 / (1 + exp(A f + B)).
  double PositiveProbability(double decision) const;
};

struct SvcModel {
  std::vector<std::string> classes;  // sorted
  int dims = 0;
  double gamma = 0.0;
  double c = 0.0;
  std::vector<PairMachine> pairs;  // (0,1), (0,2), ..., (k-2,k-1)
};

struct SvrModel {
  int dims = 0;
  double gamma = 0.0;
  double c = 0.0;
  double epsilon = 0.0;
  Matrix support_vectors;
  std::vector<double> coef;  // alpha_i - alpha*_i
  double rho = 0.0;
};

// Binary C-SVC dual; `labels` are +1/-1. Returns alpha (not multiplied by y).
std::vector<double> SolveSvcDual(const Matrix& x, const std::vector<int>& labels, double c,
                                 double gamma, double tolerance, double* rho,
                                 SolverStats* stats = nullptr);

// Regularized Newton fit of the Platt sigmoid on decision values.
void FitPlattSigmoid(const std::vector<double>& decisions, const std::vector<int>& labels,
                     double* a, double* b);

// Second pairwise-coupling method; r[i][j] = P(i | i or j), r[j][i] = 1 - r[i][j].
std::vector<double> CouplePairwise(const Matrix& r);

SvcModel TrainSvc(const Matrix& x, const std::vector<std::string>& labels,
                  const SvmParams& params, std::uint64_t seed,
                  std::vector<SolverStats>* stats = nullptr);
std::vector<double> PredictProba(const SvcModel& model, std::span<const double> x);
int PredictClass(const SvcModel& model, std::span<const double> x);

SvrModel TrainSvr(const Matrix& x, const std::vector<double>& y, const SvmParams& params,
                  SolverStats* stats = nullptr);
double PredictSvr(const SvrModel& model, std::span<const double> x);

// Section bodies of the model text format. Each Write* emits the section
// header line ("[scaler]", "[svc]", "[svr:<label>]") followed by its fields.
void WriteScaler(std::ostream& out, const ScaleParams& params);
void WriteSvc(std::ostream& out, const SvcModel& model);
void WriteSvr(std::ostream& out, const SvrModel& model, const std::string& label);

// Line-numbered reader over the model format; parse errors carry the line.
class ModelReader {
 public:
  explicit ModelReader(std::istream& in);

  // Consumes the version header; "missing header" on empty input.
  void ExpectHeader();
  // Next non-empty line, or false at end of stream.
  bool NextLine(std::string& line);
  std::string RequireLine(const char* what);
  std::vector<std::string> RequireFields(const char* key, std::size_t count);
  double ParseNumber(const std::string& token);
  long long ParseCount(const std::string& token);
  void PushBack(std::string line);
  [[noreturn]] void Error(const std::string& message) const;
  int line_number() const { return line_number_; }

 private:
  std::istream& in_;
  int line_number_ = 0;
  bool has_pushed_ = false;
  std::string pushed_;
};

ScaleParams ReadScaler(ModelReader& reader);
SvcModel ReadSvc(ModelReader& reader);
SvrModel ReadSvr(ModelReader& reader);

// Standalone round trip: header line plus one section.
std::string SerializeSvc(const SvcModel& model);
std::string SerializeSvr(const SvrModel& model);
SvcModel DeserializeSvc(const std::string& text);
SvrModel DeserializeSvr(const std::string& text);

}  // namespace eniqa

#endif  // ENIQA_SVM_HPP_
