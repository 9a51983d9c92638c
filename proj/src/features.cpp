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

#include "eniqa/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "eniqa/entropy.hpp"
#include "eniqa/error.hpp"
#include "eniqa/numfmt.hpp"

namespace eniqa {

void FeatureConfig::Validate() const {
  if (window_rows < 2 || window_cols < 2) {
    Fail(ErrorKind::kConfig, "window sides must be >= 2");
  }
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    Fail(ErrorKind::kConfig, "keep fraction must lie in (0, 1]");
  }
  if (layout_version != kFeatureLayoutVersion) {
    Fail(ErrorKind::kConfig, "unsupported feature layout version " +
                                 std::to_string(layout_version));
  }
  log_gabor.Validate();
}

std::string FeatureConfig::Describe() const {
  std::ostringstream out;
  out << "layout=" << layout_version << " window=" << window_rows << "x" << window_cols
      << " keep=" << FormatDouble(keep_fraction)
      << " freqs=" << FormatDouble(log_gabor.center_freqs[0]) << ","
      << FormatDouble(log_gabor.center_freqs[1]) << " orients=";
  for (int i = 0; i < kNumOrients; ++i) {
    out << (i ? "," : "") << FormatDouble(log_gabor.orientations[i]);
  }
  out << " sigma_ratio=" << FormatDouble(log_gabor.sigma_ratio)
      << " sigma_theta=" << FormatDouble(log_gabor.sigma_theta);
  return out.str();
}

std::uint64_t FeatureConfig::Hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : Describe()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

const char* ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kFull: return "full";
    case ModelKind::kEniqa1: return "eniqa1";
    case ModelKind::kEniqa2: return "eniqa2";
    case ModelKind::kEniqa3: return "eniqa3";
  }
  return "full";
}

ModelKind ParseModelKind(const std::string& name) {
  if (name == "full") return ModelKind::kFull;
  if (name == "eniqa1") return ModelKind::kEniqa1;
  if (name == "eniqa2") return ModelKind::kEniqa2;
  if (name == "eniqa3") return ModelKind::kEniqa3;
  Fail(ErrorKind::kConfig, "unknown model kind '" + name + "'");
}

FeatureRange SubsetRange(ModelKind kind) {
  switch (kind) {
    case ModelKind::kFull: return {0, kNumFeatures};
    case ModelKind::kEniqa1: return {0, 6};
    case ModelKind::kEniqa2: return {6, 36};
    case ModelKind::kEniqa3: return {42, 14};
  }
  return {0, kNumFeatures};
}

std::vector<double> FeatureSubset(const FeatureVector& v, ModelKind kind) {
  const FeatureRange range = SubsetRange(kind);
  return {v.values.begin() + range.offset, v.values.begin() + range.offset + range.length};
}

std::size_t PatchGrid::KeptCount() const {
  return static_cast<std::size_t>(std::count(kept.begin(), kept.end(), true));
}

PatchGrid PartitionPatches(int width, int height, int window_rows, int window_cols) {
  if (window_rows < 2 || window_cols < 2) {
    Fail(ErrorKind::kArgument, "patch sides must be >= 2");
  }
  const int rows = height / window_rows;
  const int cols = width / window_cols;
  if (rows < 1 || cols < 1) {
    Fail(ErrorKind::kSize, "image " + std::to_string(width) + "x" + std::to_string(height) +
                               " holds no " + std::to_string(window_rows) + "x" +
                               std::to_string(window_cols) + " patch");
  }
  PatchGrid grid;
  grid.window_rows = window_rows;
  grid.window_cols = window_cols;
  grid.origins.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) grid.origins.push_back({i * window_rows, j * window_cols});
  }
  grid.kept.assign(grid.origins.size(), true);
  return grid;
}

std::size_t KeepCount(std::size_t patches, double keep_fraction) {
  // The epsilon absorbs representation error in products like 0.8 * 5.
  const double want = std::ceil(keep_fraction * static_cast<double>(patches) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(want, 0.0)), 1, patches);
}

void SelectByScore(PatchGrid& grid, std::vector<double> scores, double keep_fraction) {
  const std::size_t n = grid.origins.size();
  if (scores.size() != n) Fail(ErrorKind::kArgument, "one score per patch is required");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  grid.kept.assign(n, false);
  const std::size_t keep = KeepCount(n, keep_fraction);
  for (std::size_t i = 0; i < keep; ++i) grid.kept[order[i]] = true;
  grid.saliency = std::move(scores);
}

void SelectSalientPatches(PatchGrid& grid, const RealMap& saliency, double keep_fraction) {
  std::vector<double> scores;
  scores.reserve(grid.origins.size());
  for (const PatchOrigin& o : grid.origins) {
    if (o.row + grid.window_rows > saliency.height || o.col + grid.window_cols > saliency.width) {
      Fail(ErrorKind::kArgument, "saliency map does not cover the patch grid");
    }
    double sum = 0.0;
    for (int i = 0; i < grid.window_rows; ++i) {
      for (int j = 0; j < grid.window_cols; ++j) sum += saliency.at(o.row + i, o.col + j);
    }
    scores.push_back(sum / (grid.window_rows * grid.window_cols));
  }
  SelectByScore(grid, std::move(scores), keep_fraction);
}

TeStats MomentStats(const std::vector<double>& values) {
  if (values.empty()) Fail(ErrorKind::kState, "moments of an empty set");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (const double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  TeStats stats;
  stats.mean = mean;
  stats.skewness = m2 < 1e-12 ? 0.0 : m3 / std::pow(m2, 1.5);
  return stats;
}

TeStats PatchTeStats(const GrayImage& map8, const GrayImage& neighbor_means,
                     const PatchGrid& grid) {
  std::vector<double> te;
  te.reserve(grid.origins.size());
  for (std::size_t p = 0; p < grid.origins.size(); ++p) {
    if (!grid.kept[p]) continue;
    te.push_back(WindowEntropy2d(map8, neighbor_means, grid.origins[p].row,
                                 grid.origins[p].col, grid.window_rows, grid.window_cols));
  }
  if (te.empty()) Fail(ErrorKind::kState, "no kept patches");
  return MomentStats(te);
}

namespace {

constexpr std::array<std::pair<int, int>, 3> kChannelPairs = {{{0, 1}, {0, 2}, {1, 2}}};
constexpr std::array<std::pair<int, int>, 6> kOrientPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

struct ScaleFeatures {
  std::array<double, 3> channel_mi{};
  TeStats gray_te;
  std::array<TeStats, kNumSubBands> band_te{};
  std::array<double, 6> orient_mi{};
  double freq_mi = 0.0;
};

RealMap SumMagnitudes(const std::vector<SubBand>& bands, const std::vector<int>& indices) {
  RealMap sum = bands[indices.front()].magnitude;
  for (std::size_t k = 1; k < indices.size(); ++k) {
    const RealMap& m = bands[indices[k]].magnitude;
    for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += m.data[i];
  }
  return sum;
}

ScaleFeatures ExtractScale(const RgbImage& img, const FeatureConfig& config) {
  ScaleFeatures out;
  const std::array<GrayImage, 3> channels = {ExtractChannel(img, 0), ExtractChannel(img, 1),
                                             ExtractChannel(img, 2)};
  for (std::size_t k = 0; k < kChannelPairs.size(); ++k) {
    out.channel_mi[k] =
        MutualInfo(channels[kChannelPairs[k].first], channels[kChannelPairs[k].second]);
  }

  const GrayImage gray = ToGrayscale(img);
  PatchGrid grid = PartitionPatches(gray.width, gray.height, config.window_rows,
                                    config.window_cols);
  SelectSalientPatches(grid, SpectralResidualSaliency(gray), config.keep_fraction);
  out.gray_te = PatchTeStats(gray, NeighborMeanMap(gray), grid);

  const std::vector<SubBand> bands = ApplyFilterBank(gray, config.log_gabor);
  for (int b = 0; b < kNumSubBands; ++b) {
    out.band_te[b] = PatchTeStats(bands[b].quantized, NeighborMeanMap(bands[b].quantized), grid);
  }

  std::array<GrayImage, kNumOrients> by_orient;
  for (int o = 0; o < kNumOrients; ++o) {
    by_orient[o] = QuantizeMinMax(SumMagnitudes(bands, {o, kNumOrients + o}));
  }
  for (std::size_t k = 0; k < kOrientPairs.size(); ++k) {
    out.orient_mi[k] = MutualInfo(by_orient[kOrientPairs[k].first],
                                  by_orient[kOrientPairs[k].second]);
  }

  std::array<GrayImage, kNumFreqs> by_freq;
  for (int f = 0; f < kNumFreqs; ++f) {
    std::vector<int> indices;
    for (int o = 0; o < kNumOrients; ++o) indices.push_back(f * kNumOrients + o);
    by_freq[f] = QuantizeMinMax(SumMagnitudes(bands, indices));
  }
  out.freq_mi = MutualInfo(by_freq[0], by_freq[1]);
  return out;
}

}  // namespace

FeatureVector ExtractFeatures(const RgbImage& img, const FeatureConfig& config) {
  config.Validate();
  if (img.width < kMinFeatureImageSide || img.height < kMinFeatureImageSide) {
    Fail(ErrorKind::kSize, "image " + std::to_string(img.width) + "x" +
                               std::to_string(img.height) + " is smaller than 32x32");
  }
  const std::array<ScaleFeatures, 2> scales = {ExtractScale(img, config),
                                               ExtractScale(DownsampleNearest(img, 2), config)};
  FeatureVector v;
  int k = 0;
  for (const auto& s : scales) {
    for (const double mi : s.channel_mi) v.values[k++] = mi;
  }
  for (const auto& s : scales) {
    v.values[k++] = s.gray_te.mean;
    v.values[k++] = s.gray_te.skewness;
  }
  for (const auto& s : scales) {
    for (const TeStats& t : s.band_te) {
      v.values[k++] = t.mean;
      v.values[k++] = t.skewness;
    }
  }
  for (const auto& s : scales) {
    for (const double mi : s.orient_mi) v.values[k++] = mi;
  }
  for (const auto& s : scales) v.values[k++] = s.freq_mi;

  for (int i = 0; i < kNumFeatures; ++i) {
    if (!std::isfinite(v.values[i])) {
      Fail(ErrorKind::kInternal, "feature f" + std::to_string(i + 1) + " is not finite");
    }
  }
  return v;
}

void WriteFeatureCsvHeader(std::ostream& out) {
  out << "path";
  for (int i = 1; i <= kNumFeatures; ++i) out << ",f" << i;
  out << "\n";
}

void WriteFeatureCsvRow(std::ostream& out, const std::string& path, const FeatureVector& v) {
  out << path;
  for (const double x : v.values) out << ',' << FormatDouble(x);
  out << "\n";
}

}  // namespace eniqa
