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

// The 56-dimensional entropy feature vector.
//
// Layout (1-based feature numbers):
//   f1-f6    MI of channel pairs (R,G) (R,B) (G,B), scale 1 then scale 2
//   f7-f10   mean, skewness of patch TE on the grayscale image, scale 1 then 2
//   f11-f42  mean, skewness of patch TE on the 8 quantized sub-bands;
//            per scale: freq0 {0,45,90,135} then freq1 {0,45,90,135}
//   f43-f54  MI between orientation aggregates (0,45) (0,90) (0,135) (45,90)
//            (45,135) (90,135), scale 1 then 2
//   f55-f56  MI between the two frequency aggregates, scale 1 then 2
// Scale 2 is the RGB image downsampled by 2 (nearest neighbor).

#ifndef ENIQA_FEATURES_HPP_
#define ENIQA_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eniqa/image.hpp"
#include "eniqa/spectral.hpp"

namespace eniqa {

inline constexpr int kNumFeatures = 56;
inline constexpr int kFeatureLayoutVersion = 1;
inline constexpr std::array<int, 4> kGroupBoundaries = {6, 10, 42, 54};
inline constexpr int kMinFeatureImageSide = 32;

struct FeatureConfig {
  int window_rows = 8;  // K
  int window_cols = 8;  // L
  double keep_fraction = 0.8;
  LogGaborParams log_gabor;
  int layout_version = kFeatureLayoutVersion;

  void Validate() const;
  // One-line canonical text; identical configs give identical strings.
  std::string Describe() const;
  std::uint64_t Hash() const;
  bool operator==(const FeatureConfig&) const = default;
};

struct FeatureVector {
  std::array<double, kNumFeatures> values{};

  double operator[](int index) const { return values[index]; }
  bool operator==(const FeatureVector&) const = default;
};

enum class ModelKind { kFull, kEniqa1, kEniqa2, kEniqa3 };

const char* ModelKindName(ModelKind kind);  // "full", "eniqa1", ...
ModelKind ParseModelKind(const std::string& name);

struct FeatureRange {
  int offset;
  int length;
};
FeatureRange SubsetRange(ModelKind kind);
std::vector<double> FeatureSubset(const FeatureVector& v, ModelKind kind);

struct PatchOrigin {
  int row;
  int col;
  bool operator==(const PatchOrigin&) const = default;
};

struct PatchGrid {
  int window_rows = 0;
  int window_cols = 0;
  std::vector<PatchOrigin> origins;  // raster order
  std::vector<double> saliency;      // mean saliency per patch
  std::vector<bool> kept;

  std::size_t KeptCount() const;
};

// Non-overlapping tiling; trailing partial patches are dropped.
PatchGrid PartitionPatches(int width, int height, int window_rows, int window_cols);

std::size_t KeepCount(std::size_t patches, double keep_fraction);

// Keeps the ceil(keep_fraction * n) patches with the highest mean saliency;
// equal scores keep the earlier patch in raster order.
void SelectSalientPatches(PatchGrid& grid, const RealMap& saliency, double keep_fraction);

// Marks patches from precomputed scores (same tie rule).
void SelectByScore(PatchGrid& grid, std::vector<double> scores, double keep_fraction);

struct TeStats {
  double mean = 0.0;
  double skewness = 0.0;
};

// Population mean and skewness m3 / m2^1.5; skewness is 0 when m2 < 1e-12.
TeStats MomentStats(const std::vector<double>& values);

// TE of every kept patch, pairing map8 with the full-image neighbor means.
TeStats PatchTeStats(const GrayImage& map8, const GrayImage& neighbor_means,
                     const PatchGrid& grid);

FeatureVector ExtractFeatures(const RgbImage& img, const FeatureConfig& config = {});

// CSV with header `path,f1,...,f56`, round-trip decimal precision.
void WriteFeatureCsvHeader(std::ostream& out);
void WriteFeatureCsvRow(std::ostream& out, const std::string& path, const FeatureVector& v);

}  // namespace eniqa

#endif  // ENIQA_FEATURES_HPP_
