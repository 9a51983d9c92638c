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

#include "eniqa/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "eniqa/error.hpp"

namespace eniqa {

namespace {

double EntropyFromCounts(std::span<const std::uint32_t> counts, double total) {
  double h = 0.0;
  for (const std::uint32_t c : counts) {
    if (c == 0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

// Entropy of a small multiset of 16-bit keys by sorting and counting runs;
// cheaper than clearing a 256x256 table for every 8x8 patch.
double EntropyOfKeys(std::vector<std::uint16_t>& keys) {
  std::sort(keys.begin(), keys.end());
  const double total = static_cast<double>(keys.size());
  double h = 0.0;
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    const double p = static_cast<double>(j - i) / total;
    h -= p * std::log2(p);
    i = j;
  }
  return h;
}

void CheckSameShape(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height) {
    Fail(ErrorKind::kArgument, "maps have different dimensions");
  }
}

}  // namespace

double Entropy1d(std::span<const std::uint8_t> values) {
  if (values.empty()) Fail(ErrorKind::kArgument, "entropy of an empty sequence");
  std::array<std::uint32_t, 256> counts{};
  for (const std::uint8_t v : values) ++counts[v];
  return EntropyFromCounts(counts, static_cast<double>(values.size()));
}

double Entropy2d(std::span<const std::uint8_t> values, std::span<const std::uint8_t> paired) {
  if (values.empty()) Fail(ErrorKind::kArgument, "entropy of an empty sequence");
  if (values.size() != paired.size()) {
    Fail(ErrorKind::kArgument, "paired sequences differ in length");
  }
  if (values.size() <= 4096) {
    std::vector<std::uint16_t> keys(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      keys[i] = static_cast<std::uint16_t>((values[i] << 8) | paired[i]);
    }
    return EntropyOfKeys(keys);
  }
  std::vector<std::uint32_t> counts(256 * 256, 0);
  for (std::size_t i = 0; i < values.size(); ++i) ++counts[(values[i] << 8) | paired[i]];
  return EntropyFromCounts(counts, static_cast<double>(values.size()));
}

double JointEntropy(const GrayImage& a, const GrayImage& b) {
  CheckSameShape(a, b);
  return Entropy2d(a.data, b.data);
}

double MutualInfo(const GrayImage& a, const GrayImage& b) {
  CheckSameShape(a, b);
  const double mi = Entropy1d(a.data) + Entropy1d(b.data) - Entropy2d(a.data, b.data);
  if (mi < 0.0 && mi > -1e-9) return 0.0;
  return mi;
}

GrayImage NeighborMeanMap(const GrayImage& img) {
  if (img.width < 3 || img.height < 3) {
    Fail(ErrorKind::kSize, "neighbor mean map needs at least a 3x3 image");
  }
  GrayImage out(img.width, img.height);
  const int w = img.width;
  const int h = img.height;
  for (int i = 0; i < h; ++i) {
    const int up = std::max(i - 1, 0);
    const int down = std::min(i + 1, h - 1);
    for (int j = 0; j < w; ++j) {
      const int left = std::max(j - 1, 0);
      const int right = std::min(j + 1, w - 1);
      const int sum = img.at(up, left) + img.at(up, j) + img.at(up, right) + img.at(i, left) +
                      img.at(i, right) + img.at(down, left) + img.at(down, j) +
                      img.at(down, right);
      // Half-away-from-zero on a nonnegative integer / 8.
      out.at(i, j) = static_cast<std::uint8_t>((sum + 4) / 8);
    }
  }
  return out;
}

double WindowEntropy2d(const GrayImage& values, const GrayImage& paired, int row, int col,
                       int rows, int cols) {
  CheckSameShape(values, paired);
  if (row < 0 || col < 0 || rows < 1 || cols < 1 || row + rows > values.height ||
      col + cols > values.width) {
    Fail(ErrorKind::kArgument, "window lies outside the map");
  }
  std::vector<std::uint16_t> keys;
  keys.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = row; i < row + rows; ++i) {
    for (int j = col; j < col + cols; ++j) {
      keys.push_back(static_cast<std::uint16_t>((values.at(i, j) << 8) | paired.at(i, j)));
    }
  }
  return EntropyOfKeys(keys);
}

}  // namespace eniqa
