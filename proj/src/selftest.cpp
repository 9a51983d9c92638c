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

#include "eniqa/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "eniqa/entropy.hpp"
#include "eniqa/error.hpp"
#include "eniqa/eval.hpp"
#include "eniqa/rng.hpp"
#include "eniqa/spectral.hpp"
#include "eniqa/svm.hpp"

namespace eniqa {

namespace {

std::string Num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

GrayImage RandomGray(Rng& rng, int w, int h, int levels) {
  GrayImage img(w, h);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.UniformInt(levels));
  return img;
}

SelftestCheck EntropyBounds(Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const GrayImage a = RandomGray(rng, 16, 16, 1 + static_cast<int>(rng.UniformInt(256)));
    const GrayImage b = RandomGray(rng, 16, 16, 1 + static_cast<int>(rng.UniformInt(256)));
    const double h1 = Entropy1d(a.data);
    const double h2 = Entropy2d(a.data, b.data);
    const double hb = Entropy1d(b.data);
    const double n = std::log2(256.0);
    worst = std::max({worst, -h1, h1 - 8.0, std::max(h1, hb) - h2 - 1e-12, h2 - h1 - hb - 1e-12,
                      h2 - n * 2.0});
  }
  return {"entropy bounds", worst <= 0.0, "max violation " + Num(worst)};
}

SelftestCheck MutualInfoSymmetry(Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const GrayImage a = RandomGray(rng, 12, 12, 8);
    GrayImage b = RandomGray(rng, 12, 12, 8);
    for (std::size_t i = 0; i < b.data.size(); i += 2) b.data[i] = a.data[i];
    const double ab = MutualInfo(a, b);
    const double ba = MutualInfo(b, a);
    worst = std::max({worst, std::abs(ab - ba), -ab, std::abs(MutualInfo(a, a) - Entropy1d(a.data))});
  }
  return {"mutual information symmetry", worst <= 1e-12, "max deviation " + Num(worst)};
}

SelftestCheck FilterDcGain() {
  const auto bank = BuildFilterBank(64, 64, LogGaborParams{});
  double dc = 0.0;
  double min_peak = 1.0;
  double max_peak = 0.0;
  for (const RealMap& filter : bank) {
    dc = std::max(dc, std::abs(filter.at(0, 0)));
    const double peak = *std::max_element(filter.data.begin(), filter.data.end());
    min_peak = std::min(min_peak, peak);
    max_peak = std::max(max_peak, peak);
  }
  const bool ok = dc == 0.0 && min_peak >= 0.95 && max_peak <= 1.0;
  return {"log-Gabor DC gain", ok,
          "dc " + Num(dc) + ", peak range [" + Num(min_peak) + ", " + Num(max_peak) + "]"};
}

SelftestCheck ProbabilitySimplex(Rng& rng) {
  Matrix x;
  std::vector<std::string> labels;
  const double centers[3][2] = {{-2.0, 0.0}, {2.0, 0.0}, {0.0, 2.5}};
  const char* names[3] = {"A", "B", "C"};
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 12; ++i) {
      x.push_back({centers[c][0] + 0.5 * rng.Normal(), centers[c][1] + 0.5 * rng.Normal()});
      labels.push_back(names[c]);
    }
  }
  SvmParams params;
  params.c = 10.0;
  params.gamma = 0.5;
  const SvcModel model = TrainSvc(x, labels, params, 7);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::vector<double> probe = {8.0 * rng.Uniform() - 4.0, 8.0 * rng.Uniform() - 4.0};
    const auto p = PredictProba(model, probe);
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    worst = std::max(worst, std::abs(sum - 1.0));
    for (const double v : p) worst = std::max(worst, std::max(-v, v - 1.0));
  }
  return {"probability simplex", worst <= 1e-9, "max deviation " + Num(worst)};
}

std::vector<double> OracleRanks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0.0;
    double equal = 0.0;
    for (const double w : v) {
      if (w < v[i]) less += 1.0;
      if (w == v[i]) equal += 1.0;
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

SelftestCheck SroccOracle(Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 5 + rng.UniformInt(60);
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.UniformInt(10));
      b[i] = a[i] + static_cast<double>(rng.UniformInt(8));
    }
    if (std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; }) ||
        std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; })) {
      continue;
    }
    const auto ra = OracleRanks(a);
    const auto rb = OracleRanks(b);
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sab += (ra[i] - ma) * (rb[i] - mb);
      saa += (ra[i] - ma) * (ra[i] - ma);
      sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    worst = std::max(worst, std::abs(Srocc(a, b) - sab / std::sqrt(saa * sbb)));
  }
  return {"SROCC rank oracle", worst <= 1e-12, "max deviation " + Num(worst)};
}

}  // namespace

std::vector<SelftestCheck> RunSelftest() {
  Rng rng(DeriveSeed(0x5e1f7e57ULL, RngStream::kTest));
  std::vector<SelftestCheck> checks;
  auto run = [&](const char* name, auto&& fn) {
    try {
      checks.push_back(fn());
    } catch (const std::exception& e) {
      checks.push_back({name, false, e.what()});
    }
  };
  run("entropy bounds", [&] { return EntropyBounds(rng); });
  run("mutual information symmetry", [&] { return MutualInfoSymmetry(rng); });
  run("log-Gabor DC gain", [&] { return FilterDcGain(); });
  run("probability simplex", [&] { return ProbabilitySimplex(rng); });
  run("SROCC rank oracle", [&] { return SroccOracle(rng); });
  return checks;
}

}  // namespace eniqa
