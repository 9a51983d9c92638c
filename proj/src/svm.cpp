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

#include "eniqa/svm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "eniqa/error.hpp"
#include "eniqa/numfmt.hpp"
#include "eniqa/rng.hpp"

namespace eniqa {

void SvmParams::Validate() const {
  if (!(c > 0.0)) Fail(ErrorKind::kConfig, "SVM cost C must be > 0");
  if (!(gamma > 0.0)) Fail(ErrorKind::kConfig, "RBF gamma must be > 0");
  if (!(epsilon >= 0.0)) Fail(ErrorKind::kConfig, "SVR epsilon must be >= 0");
  if (!(tolerance > 0.0)) Fail(ErrorKind::kConfig, "SMO tolerance must be > 0");
  if (platt_folds < 2) Fail(ErrorKind::kConfig, "Platt scaling needs >= 2 folds");
}

double RbfKernel(std::span<const double> x, std::span<const double> y, double gamma) {
  if (x.size() != y.size()) Fail(ErrorKind::kArgument, "kernel arguments differ in dimension");
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

ScaleParams FitScaler(const Matrix& rows) {
  if (rows.empty()) Fail(ErrorKind::kArgument, "scaler needs at least one row");
  ScaleParams params;
  params.min = rows.front();
  params.max = rows.front();
  for (const auto& row : rows) {
    if (row.size() != params.min.size()) Fail(ErrorKind::kArgument, "ragged feature matrix");
    for (std::size_t d = 0; d < row.size(); ++d) {
      params.min[d] = std::min(params.min[d], row[d]);
      params.max[d] = std::max(params.max[d], row[d]);
    }
  }
  return params;
}

std::vector<double> ApplyScaler(const ScaleParams& params, std::span<const double> x) {
  if (x.size() != params.dims()) {
    Fail(ErrorKind::kArgument, "scaler expects " + std::to_string(params.dims()) +
                                   " features, got " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double span = params.max[d] - params.min[d];
    out[d] = span > 0.0 ? -1.0 + 2.0 * (x[d] - params.min[d]) / span : 0.0;
  }
  return out;
}

namespace {

constexpr std::size_t kFullGramLimit = 4000;
constexpr double kTau = 1e-12;

// Gram matrix of the training rows: materialized up to kFullGramLimit rows,
// computed on demand beyond that.
class KernelMatrix {
 public:
  KernelMatrix(const Matrix& x, double gamma) : x_(x), gamma_(gamma) {
    const std::size_t n = x.size();
    if (n <= kFullGramLimit) {
      gram_.resize(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        gram_[i * n + i] = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
          const double k = RbfKernel(x[i], x[j], gamma);
          gram_[i * n + j] = k;
          gram_[j * n + i] = k;
        }
      }
    }
  }

  void Row(std::size_t i, std::vector<double>& out) const {
    const std::size_t n = x_.size();
    out.resize(n);
    if (!gram_.empty()) {
      std::copy_n(gram_.begin() + static_cast<std::ptrdiff_t>(i * n), n, out.begin());
      return;
    }
    for (std::size_t j = 0; j < n; ++j) out[j] = RbfKernel(x_[i], x_[j], gamma_);
  }

 private:
  const Matrix& x_;
  double gamma_;
  std::vector<double> gram_;
};

// SMO for   min 0.5 a'Qa + p'a   s.t.  y'a = 0,  0 <= a <= C
// with Q_st = y_s y_t K(k(s), k(t)); k maps a dual variable onto a kernel row
// so the SVR problem (2n variables over n rows) shares the code path.
struct DualProblem {
  std::vector<std::size_t> kernel_index;
  std::vector<int> y;
  std::vector<double> p;
};

struct DualSolution {
  std::vector<double> alpha;
  double rho = 0.0;
  SolverStats stats;
};

DualSolution SolveDual(const KernelMatrix& kernel, const DualProblem& problem, double c,
                       double tolerance, bool track_objective) {
  const std::size_t l = problem.y.size();
  const auto& y = problem.y;
  const auto& ki = problem.kernel_index;
  DualSolution sol;
  sol.alpha.assign(l, 0.0);
  std::vector<double>& alpha = sol.alpha;
  std::vector<double> grad = problem.p;
  std::vector<double> row_i;
  std::vector<double> row_j;

  auto objective = [&]() {
    double obj = 0.0;
    for (std::size_t t = 0; t < l; ++t) obj += alpha[t] * (grad[t] + problem.p[t]);
    return 0.5 * obj;
  };
  double previous = 0.0;

  const long max_iter = std::max<long>(10'000'000L, 100L * static_cast<long>(l));
  long iter = 0;
  for (; iter < max_iter; ++iter) {
    // Maximal violating pair.
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1;
    std::ptrdiff_t j = -1;
    for (std::size_t t = 0; t < l; ++t) {
      const double v = -y[t] * grad[t];
      const bool up = y[t] > 0 ? alpha[t] < c : alpha[t] > 0.0;
      const bool low = y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < c;
      if (up && v > g_max) {
        g_max = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (low && v < g_min) {
        g_min = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0 || j < 0 || g_max - g_min < tolerance) break;

    kernel.Row(ki[i], row_i);
    kernel.Row(ki[j], row_j);
    const double q_ij = y[i] * y[j] * row_i[ki[j]];
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = 2.0 + 2.0 * q_ij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * q_ij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double d_i = alpha[i] - old_i;
    const double d_j = alpha[j] - old_j;
    for (std::size_t t = 0; t < l; ++t) {
      grad[t] += y[t] * (y[i] * row_i[ki[t]] * d_i + y[j] * row_j[ki[t]] * d_j);
    }
    if (track_objective) {
      const double obj = objective();
      if (obj > previous + 1e-12 * std::max(1.0, std::abs(previous))) {
        sol.stats.objective_monotone = false;
      }
      assert(obj <= previous + 1e-9 * std::max(1.0, std::abs(previous)));
      previous = obj;
    }
  }
  sol.stats.iterations = iter;
  sol.stats.objective = objective();

  // Bias: average over free variables, else the midpoint of the feasible range.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  long free_count = 0;
  for (std::size_t t = 0; t < l; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  sol.rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (upper + lower);
  return sol;
}

double Sigmoid(double decision, double a, double b) {
  const double f = decision * a + b;
  // Evaluated on the stable side.
  return f >= 0.0 ? std::exp(-f) / (1.0 + std::exp(-f)) : 1.0 / (1.0 + std::exp(f));
}

}  // namespace

std::vector<double> SolveSvcDual(const Matrix& x, const std::vector<int>& labels, double c,
                                 double gamma, double tolerance, double* rho,
                                 SolverStats* stats) {
  if (x.size() != labels.size() || x.empty()) {
    Fail(ErrorKind::kArgument, "SVC needs one +1/-1 label per row");
  }
  const KernelMatrix kernel(x, gamma);
  DualProblem problem;
  problem.kernel_index.resize(x.size());
  std::iota(problem.kernel_index.begin(), problem.kernel_index.end(), 0);
  problem.y = labels;
  problem.p.assign(x.size(), -1.0);
  DualSolution sol = SolveDual(kernel, problem, c, tolerance, stats != nullptr);
  if (rho) *rho = sol.rho;
  if (stats) *stats = sol.stats;
  return std::move(sol.alpha);
}

void FitPlattSigmoid(const std::vector<double>& decisions, const std::vector<int>& labels,
                     double* a_out, double* b_out) {
  const std::size_t l = decisions.size();
  double prior1 = 0.0;
  double prior0 = 0.0;
  for (const int y : labels) (y > 0 ? prior1 : prior0) += 1.0;
  const int max_iter = 100;
  const double min_step = 1e-10;
  const double sigma = 1e-12;
  const double eps = 1e-5;
  const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo_target = 1.0 / (prior0 + 2.0);
  std::vector<double> t(l);
  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));

  auto loss = [&](double aa, double bb) {
    double f = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      const double fapb = decisions[i] * aa + bb;
      f += fapb >= 0.0 ? t[i] * fapb + std::log1p(std::exp(-fapb))
                       : (t[i] - 1.0) * fapb + std::log1p(std::exp(fapb));
    }
    return f;
  };
  for (std::size_t i = 0; i < l; ++i) t[i] = labels[i] > 0 ? hi_target : lo_target;
  double fval = loss(a, b);

  for (int iter = 0; iter < max_iter; ++iter) {
    double h11 = sigma;
    double h22 = sigma;
    double h21 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      const double fapb = decisions[i] * a + b;
      double p;
      double q;
      if (fapb >= 0.0) {
        p = std::exp(-fapb) / (1.0 + std::exp(-fapb));
        q = 1.0 / (1.0 + std::exp(-fapb));
      } else {
        p = 1.0 / (1.0 + std::exp(fapb));
        q = std::exp(fapb) / (1.0 + std::exp(fapb));
      }
      const double d2 = p * q;
      h11 += decisions[i] * decisions[i] * d2;
      h22 += d2;
      h21 += decisions[i] * d2;
      const double d1 = t[i] - p;
      g1 += decisions[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < eps && std::abs(g2) < eps) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= min_step) {
      const double new_a = a + step * da;
      const double new_b = b + step * db;
      const double new_f = loss(new_a, new_b);
      if (new_f < fval + 1e-4 * step * gd) {
        a = new_a;
        b = new_b;
        fval = new_f;
        break;
      }
      step /= 2.0;
    }
    if (step < min_step) break;
  }
  *a_out = a;
  *b_out = b;
}

std::vector<double> CouplePairwise(const Matrix& r) {
  const std::size_t k = r.size();
  if (k == 2) return {r[0][1], r[1][0]};
  Matrix q(k, std::vector<double>(k, 0.0));
  std::vector<double> p(k, 1.0 / static_cast<double>(k));
  std::vector<double> qp(k);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t j = 0; j < t; ++j) {
      q[t][t] += r[j][t] * r[j][t];
      q[t][j] = q[j][t];
    }
    for (std::size_t j = t + 1; j < k; ++j) {
      q[t][t] += r[j][t] * r[j][t];
      q[t][j] = -r[j][t] * r[t][j];
    }
  }
  constexpr int kMaxIter = 200;
  constexpr double kTol = 1e-10;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    double pqp = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      qp[t] = 0.0;
      for (std::size_t j = 0; j < k; ++j) qp[t] += q[t][j] * p[j];
      pqp += p[t] * qp[t];
    }
    double max_error = 0.0;
    for (std::size_t t = 0; t < k; ++t) max_error = std::max(max_error, std::abs(qp[t] - pqp));
    if (max_error < kTol) break;
    for (std::size_t t = 0; t < k; ++t) {
      const double diff = (-qp[t] + pqp) / q[t][t];
      p[t] += diff;
      pqp = (pqp + diff * (diff * q[t][t] + 2.0 * qp[t])) / (1.0 + diff) / (1.0 + diff);
      for (std::size_t j = 0; j < k; ++j) {
        qp[j] = (qp[j] + diff * q[t][j]) / (1.0 + diff);
        p[j] /= (1.0 + diff);
      }
    }
  }
  double total = 0.0;
  for (double& v : p) {
    v = std::max(v, 0.0);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

double PairMachine::Decision(std::span<const double> x, double gamma) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    sum += coef[i] * RbfKernel(support_vectors[i], x, gamma);
  }
  return sum - rho;
}

double PairMachine::PositiveProbability(double decision) const {
  return Sigmoid(decision, platt_a, platt_b);
}

namespace {

PairMachine FitPair(const Matrix& x, const std::vector<int>& y, double c, double gamma,
                    double tolerance, SolverStats* stats) {
  PairMachine machine;
  const std::vector<double> alpha = SolveSvcDual(x, y, c, gamma, tolerance, &machine.rho, stats);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0.0) {
      machine.support_vectors.push_back(x[i]);
      machine.coef.push_back(alpha[i] * y[i]);
    }
  }
  return machine;
}

// Decision values from internal cross-validation, as the input of the
// Platt fit.
std::vector<double> CrossDecisionValues(const Matrix& x, const std::vector<int>& y,
                                        const SvmParams& params, std::uint64_t seed) {
  const std::size_t l = x.size();
  const int folds = params.platt_folds;
  std::vector<std::size_t> perm(l);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.Shuffle(perm);
  std::vector<double> decisions(l, 0.0);
  for (int fold = 0; fold < folds; ++fold) {
    const std::size_t begin = fold * l / folds;
    const std::size_t end = (fold + 1) * l / folds;
    Matrix sub_x;
    std::vector<int> sub_y;
    for (std::size_t k = 0; k < l; ++k) {
      if (k >= begin && k < end) continue;
      sub_x.push_back(x[perm[k]]);
      sub_y.push_back(y[perm[k]]);
    }
    const long positives = std::count(sub_y.begin(), sub_y.end(), 1);
    const long negatives = static_cast<long>(sub_y.size()) - positives;
    if (positives == 0 || negatives == 0) {
      const double constant = positives > 0 ? 1.0 : (negatives > 0 ? -1.0 : 0.0);
      for (std::size_t k = begin; k < end; ++k) decisions[perm[k]] = constant;
      continue;
    }
    const PairMachine machine =
        FitPair(sub_x, sub_y, params.c, params.gamma, params.tolerance, nullptr);
    for (std::size_t k = begin; k < end; ++k) {
      decisions[perm[k]] = machine.Decision(x[perm[k]], params.gamma);
    }
  }
  return decisions;
}

}  // namespace

SvcModel TrainSvc(const Matrix& x, const std::vector<std::string>& labels,
                  const SvmParams& params, std::uint64_t seed, std::vector<SolverStats>* stats) {
  params.Validate();
  if (x.size() != labels.size() || x.empty()) {
    Fail(ErrorKind::kArgument, "SVC needs one label per training row");
  }
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  if (by_class.size() < 2) {
    Fail(ErrorKind::kTraining, "SVC needs at least 2 classes, got " +
                                   std::to_string(by_class.size()));
  }
  for (const auto& [label, rows] : by_class) {
    if (rows.size() < 2) {
      Fail(ErrorKind::kTraining, "class '" + label + "' has fewer than 2 training samples");
    }
  }

  SvcModel model;
  model.dims = static_cast<int>(x.front().size());
  model.gamma = params.gamma;
  model.c = params.c;
  std::vector<const std::vector<std::size_t>*> members;
  for (const auto& [label, rows] : by_class) {
    model.classes.push_back(label);
    members.push_back(&rows);
  }
  if (stats) stats->clear();
  const int k = static_cast<int>(model.classes.size());
  int pair_index = 0;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b, ++pair_index) {
      Matrix pair_x;
      std::vector<int> pair_y;
      for (const std::size_t i : *members[a]) {
        pair_x.push_back(x[i]);
        pair_y.push_back(+1);
      }
      for (const std::size_t i : *members[b]) {
        pair_x.push_back(x[i]);
        pair_y.push_back(-1);
      }
      const std::vector<double> cv = CrossDecisionValues(
          pair_x, pair_y, params, DeriveSeed(seed, RngStream::kPlattFolds, pair_index));
      SolverStats pair_stats;
      PairMachine machine = FitPair(pair_x, pair_y, params.c, params.gamma, params.tolerance,
                                    stats ? &pair_stats : nullptr);
      machine.positive = a;
      machine.negative = b;
      FitPlattSigmoid(cv, pair_y, &machine.platt_a, &machine.platt_b);
      model.pairs.push_back(std::move(machine));
      if (stats) stats->push_back(pair_stats);
    }
  }
  return model;
}

std::vector<double> PredictProba(const SvcModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.dims) {
    Fail(ErrorKind::kArgument, "SVC expects " + std::to_string(model.dims) + " features");
  }
  const std::size_t k = model.classes.size();
  constexpr double kMinProb = 1e-7;
  Matrix r(k, std::vector<double>(k, 0.0));
  for (const PairMachine& m : model.pairs) {
    const double p =
        std::clamp(m.PositiveProbability(m.Decision(x, model.gamma)), kMinProb, 1.0 - kMinProb);
    r[m.positive][m.negative] = p;
    r[m.negative][m.positive] = 1.0 - p;
  }
  return CouplePairwise(r);
}

int PredictClass(const SvcModel& model, std::span<const double> x) {
  const std::vector<double> p = PredictProba(model, x);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

SvrModel TrainSvr(const Matrix& x, const std::vector<double>& y, const SvmParams& params,
                  SolverStats* stats) {
  params.Validate();
  if (x.size() != y.size() || x.size() < 2) {
    Fail(ErrorKind::kTraining, "SVR needs at least 2 samples with one target each");
  }
  const std::size_t n = x.size();
  const KernelMatrix kernel(x, params.gamma);
  DualProblem problem;
  problem.kernel_index.resize(2 * n);
  problem.y.resize(2 * n);
  problem.p.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    problem.kernel_index[i] = i;
    problem.kernel_index[i + n] = i;
    problem.y[i] = +1;
    problem.y[i + n] = -1;
    problem.p[i] = params.epsilon - y[i];
    problem.p[i + n] = params.epsilon + y[i];
  }
  const DualSolution sol =
      SolveDual(kernel, problem, params.c, params.tolerance, stats != nullptr);
  if (stats) *stats = sol.stats;

  SvrModel model;
  model.dims = static_cast<int>(x.front().size());
  model.gamma = params.gamma;
  model.c = params.c;
  model.epsilon = params.epsilon;
  model.rho = sol.rho;
  for (std::size_t i = 0; i < n; ++i) {
    const double coef = sol.alpha[i] - sol.alpha[i + n];
    if (coef != 0.0) {
      model.support_vectors.push_back(x[i]);
      model.coef.push_back(coef);
    }
  }
  return model;
}

double PredictSvr(const SvrModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.dims) {
    Fail(ErrorKind::kArgument, "SVR expects " + std::to_string(model.dims) + " features");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    sum += model.coef[i] * RbfKernel(model.support_vectors[i], x, model.gamma);
  }
  return sum - model.rho;
}

// ---------------------------------------------------------------------------
// Text format.

namespace {

void WriteVectorLine(std::ostream& out, double lead, const std::vector<double>& v) {
  out << FormatDouble(lead);
  for (const double x : v) out << ' ' << FormatDouble(x);
  out << '\n';
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

}  // namespace

void WriteScaler(std::ostream& out, const ScaleParams& params) {
  out << "[scaler]\n";
  out << "dims " << params.dims() << '\n';
  for (std::size_t d = 0; d < params.dims(); ++d) {
    out << FormatDouble(params.min[d]) << ' ' << FormatDouble(params.max[d]) << '\n';
  }
}

void WriteSvc(std::ostream& out, const SvcModel& model) {
  out << "[svc]\n";
  out << "dims " << model.dims << '\n';
  out << "gamma " << FormatDouble(model.gamma) << '\n';
  out << "c " << FormatDouble(model.c) << '\n';
  out << "classes " << model.classes.size();
  for (const auto& label : model.classes) out << ' ' << label;
  out << '\n';
  out << "pairs " << model.pairs.size() << '\n';
  for (const PairMachine& m : model.pairs) {
    out << "pair " << m.positive << ' ' << m.negative << ' ' << m.support_vectors.size() << ' '
        << FormatDouble(m.rho) << ' ' << FormatDouble(m.platt_a) << ' '
        << FormatDouble(m.platt_b) << '\n';
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
      WriteVectorLine(out, m.coef[i], m.support_vectors[i]);
    }
  }
}

void WriteSvr(std::ostream& out, const SvrModel& model, const std::string& label) {
  out << "[svr:" << label << "]\n";
  out << "dims " << model.dims << '\n';
  out << "gamma " << FormatDouble(model.gamma) << '\n';
  out << "c " << FormatDouble(model.c) << '\n';
  out << "epsilon " << FormatDouble(model.epsilon) << '\n';
  out << "rho " << FormatDouble(model.rho) << '\n';
  out << "nsv " << model.support_vectors.size() << '\n';
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    WriteVectorLine(out, model.coef[i], model.support_vectors[i]);
  }
}

ModelReader::ModelReader(std::istream& in) : in_(in) {}

void ModelReader::ExpectHeader() {
  std::string line;
  if (!NextLine(line)) Fail(ErrorKind::kParse, "missing header");
  const auto fields = SplitFields(line);
  if (fields.size() != 2 || fields[0] != "ENIQA-MODEL") Error("missing header");
  if (fields[1] != "v1") Error("unknown version tag '" + fields[1] + "'");
}

bool ModelReader::NextLine(std::string& line) {
  if (has_pushed_) {
    has_pushed_ = false;
    line = std::move(pushed_);
    return true;
  }
  while (std::getline(in_, line)) {
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!Trim(line).empty()) return true;
  }
  return false;
}

std::string ModelReader::RequireLine(const char* what) {
  std::string line;
  if (!NextLine(line)) Error(std::string("truncated model: expected ") + what);
  return line;
}

std::vector<std::string> ModelReader::RequireFields(const char* key, std::size_t count) {
  const auto fields = SplitFields(RequireLine(key));
  if (fields.empty() || fields[0] != key) Error(std::string("expected field '") + key + "'");
  if (fields.size() != count + 1) {
    Error(std::string("field '") + key + "' expects " + std::to_string(count) + " values");
  }
  return {fields.begin() + 1, fields.end()};
}

double ModelReader::ParseNumber(const std::string& token) {
  double v = 0.0;
  if (!ParseDouble(token, v)) Error("bad number '" + token + "'");
  return v;
}

long long ModelReader::ParseCount(const std::string& token) {
  long long v = 0;
  if (!ParseInt(token, v) || v < 0) Error("bad count '" + token + "'");
  return v;
}

void ModelReader::PushBack(std::string line) {
  pushed_ = std::move(line);
  has_pushed_ = true;
}

void ModelReader::Error(const std::string& message) const {
  Fail(ErrorKind::kParse, "line " + std::to_string(line_number_) + ": " + message);
}

namespace {

std::vector<double> ReadVectorLine(ModelReader& reader, int dims, double* lead) {
  const auto fields = SplitFields(reader.RequireLine("vector row"));
  const std::size_t expected = static_cast<std::size_t>(dims) + (lead ? 1 : 0);
  if (fields.size() != expected) {
    reader.Error("expected " + std::to_string(expected) + " values, found " +
                 std::to_string(fields.size()));
  }
  std::size_t k = 0;
  if (lead) *lead = reader.ParseNumber(fields[k++]);
  std::vector<double> v;
  v.reserve(dims);
  for (; k < fields.size(); ++k) v.push_back(reader.ParseNumber(fields[k]));
  return v;
}

void ExpectSection(ModelReader& reader, const std::string& name) {
  if (Trim(reader.RequireLine(name.c_str())) != name) reader.Error("expected section " + name);
}

int ReadDims(ModelReader& reader) {
  const long long dims = reader.ParseCount(reader.RequireFields("dims", 1)[0]);
  if (dims < 1 || dims > 100000) reader.Error("bad dims");
  return static_cast<int>(dims);
}

}  // namespace

ScaleParams ReadScaler(ModelReader& reader) {
  const int dims = ReadDims(reader);
  ScaleParams params;
  for (int d = 0; d < dims; ++d) {
    const auto row = ReadVectorLine(reader, 2, nullptr);
    if (row[0] > row[1]) reader.Error("scaler min exceeds max");
    params.min.push_back(row[0]);
    params.max.push_back(row[1]);
  }
  return params;
}

SvcModel ReadSvc(ModelReader& reader) {
  SvcModel model;
  model.dims = ReadDims(reader);
  model.gamma = reader.ParseNumber(reader.RequireFields("gamma", 1)[0]);
  model.c = reader.ParseNumber(reader.RequireFields("c", 1)[0]);
  {
    const auto fields = SplitFields(reader.RequireLine("classes"));
    if (fields.size() < 2 || fields[0] != "classes") reader.Error("expected field 'classes'");
    const long long k = reader.ParseCount(fields[1]);
    if (k < 2 || fields.size() != static_cast<std::size_t>(k) + 2) {
      reader.Error("class count does not match class labels");
    }
    model.classes.assign(fields.begin() + 2, fields.end());
  }
  const long long pairs = reader.ParseCount(reader.RequireFields("pairs", 1)[0]);
  const long long k = static_cast<long long>(model.classes.size());
  if (pairs != k * (k - 1) / 2) reader.Error("pair count does not match class count");
  for (long long p = 0; p < pairs; ++p) {
    const auto f = reader.RequireFields("pair", 6);
    PairMachine m;
    m.positive = static_cast<int>(reader.ParseCount(f[0]));
    m.negative = static_cast<int>(reader.ParseCount(f[1]));
    if (m.positive >= k || m.negative >= k || m.positive == m.negative) {
      reader.Error("pair references an unknown class");
    }
    const long long nsv = reader.ParseCount(f[2]);
    m.rho = reader.ParseNumber(f[3]);
    m.platt_a = reader.ParseNumber(f[4]);
    m.platt_b = reader.ParseNumber(f[5]);
    for (long long i = 0; i < nsv; ++i) {
      double coef = 0.0;
      m.support_vectors.push_back(ReadVectorLine(reader, model.dims, &coef));
      m.coef.push_back(coef);
    }
    model.pairs.push_back(std::move(m));
  }
  return model;
}

SvrModel ReadSvr(ModelReader& reader) {
  SvrModel model;
  model.dims = ReadDims(reader);
  model.gamma = reader.ParseNumber(reader.RequireFields("gamma", 1)[0]);
  model.c = reader.ParseNumber(reader.RequireFields("c", 1)[0]);
  model.epsilon = reader.ParseNumber(reader.RequireFields("epsilon", 1)[0]);
  model.rho = reader.ParseNumber(reader.RequireFields("rho", 1)[0]);
  const long long nsv = reader.ParseCount(reader.RequireFields("nsv", 1)[0]);
  for (long long i = 0; i < nsv; ++i) {
    double coef = 0.0;
    model.support_vectors.push_back(ReadVectorLine(reader, model.dims, &coef));
    model.coef.push_back(coef);
  }
  return model;
}

std::string SerializeSvc(const SvcModel& model) {
  std::ostringstream out;
  out << kModelHeader << '\n';
  WriteSvc(out, model);
  return out.str();
}

std::string SerializeSvr(const SvrModel& model) {
  std::ostringstream out;
  out << kModelHeader << '\n';
  WriteSvr(out, model, "model");
  return out.str();
}

SvcModel DeserializeSvc(const std::string& text) {
  std::istringstream in(text);
  ModelReader reader(in);
  reader.ExpectHeader();
  ExpectSection(reader, "[svc]");
  return ReadSvc(reader);
}

SvrModel DeserializeSvr(const std::string& text) {
  std::istringstream in(text);
  ModelReader reader(in);
  reader.ExpectHeader();
  const std::string section(Trim(reader.RequireLine("[svr:<label>]")));
  if (!section.starts_with("[svr:") || !section.ends_with("]")) {
    reader.Error("expected section [svr:<label>]");
  }
  return ReadSvr(reader);
}

}  // namespace eniqa
