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

// Raster types and image I/O: uncompressed BMP24, binary PPM (P6) and
// binary PGM (P5), BT.601 grayscale conversion, nearest-neighbor resampling.

#ifndef ENIQA_IMAGE_HPP_
#define ENIQA_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace eniqa {

// Smallest accepted side of an RgbImage: two 8x8 patches per axis.
inline constexpr int kMinImageSide = 16;

enum class ImageFormat { kBmp24, kPpmP6, kPgmP5 };

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // row-major RGB triples

  RgbImage() = default;
  RgbImage(int w, int h);
  RgbImage(int w, int h, std::vector<std::uint8_t> pixels);

  std::uint8_t& at(int row, int col, int channel) {
    return data[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
  std::uint8_t at(int row, int col, int channel) const {
    return data[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
  bool operator==(const RgbImage&) const = default;
};

// Also used for any 8-bit map (channels, quantized sub-bands, neighbor means).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // row-major

  GrayImage() = default;
  GrayImage(int w, int h);
  GrayImage(int w, int h, std::vector<std::uint8_t> pixels);

  std::uint8_t& at(int row, int col) {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t size() const { return data.size(); }
  bool operator==(const GrayImage&) const = default;
};

RgbImage DecodeImage(std::span<const std::uint8_t> bytes, ImageFormat format);

// Picks the decoder from the magic bytes ("BM", "P6", "P5").
RgbImage DecodeImage(std::span<const std::uint8_t> bytes);

RgbImage LoadImage(const std::string& path);

std::vector<std::uint8_t> EncodePpm(const RgbImage& img);
std::vector<std::uint8_t> EncodeBmp(const RgbImage& img, bool bottom_up = true);
void SaveImage(const RgbImage& img, const std::string& path);

std::uint8_t LumaBt601(std::uint8_t r, std::uint8_t g, std::uint8_t b);
GrayImage ToGrayscale(const RgbImage& img);
GrayImage ExtractChannel(const RgbImage& img, int channel);

// Keeps pixel (i*factor, j*factor); output is floor(w/f) x floor(h/f).
// Throws kSize only for an empty result. Callers that need the 16x16 minimum
// (feature extraction) check it themselves.
GrayImage DownsampleNearest(const GrayImage& img, int factor = 2);
RgbImage DownsampleNearest(const RgbImage& img, int factor = 2);

// Arbitrary-size nearest-neighbor resize: dst(i, j) = src(floor(i*h/h'), floor(j*w/w')).
std::vector<double> ResizeNearest(std::span<const double> src, int width, int height,
                                  int new_width, int new_height);

std::vector<std::uint8_t> ReadFileBytes(const std::string& path);

}  // namespace eniqa

#endif  // ENIQA_IMAGE_HPP_
