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

#include "eniqa/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "eniqa/error.hpp"

namespace eniqa {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument: return "argument error";
    case ErrorKind::kSize: return "size error";
    case ErrorKind::kDecode: return "decode error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kState: return "state error";
    case ErrorKind::kIo: return "i/o error";
    case ErrorKind::kInternal: return "internal error";
  }
  return "error";
}

RgbImage::RgbImage(int w, int h)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

RgbImage::RgbImage(int w, int h, std::vector<std::uint8_t> pixels)
    : width(w), height(h), data(std::move(pixels)) {
  if (w < 1 || h < 1 || data.size() != static_cast<std::size_t>(w) * h * 3) {
    Fail(ErrorKind::kArgument, "RgbImage: data length does not match width*height*3");
  }
}

GrayImage::GrayImage(int w, int h)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

GrayImage::GrayImage(int w, int h, std::vector<std::uint8_t> pixels)
    : width(w), height(h), data(std::move(pixels)) {
  if (w < 1 || h < 1 || data.size() != static_cast<std::size_t>(w) * h) {
    Fail(ErrorKind::kArgument, "GrayImage: data length does not match width*height");
  }
}

namespace {

// Cursor over a netpbm header: whitespace separated decimal fields with
// '#' comments running to end of line.
class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  long ReadField(const char* field) {
    SkipSpaceAndComments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      Fail(ErrorKind::kDecode, std::string("malformed header: bad ") + field);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) {
        Fail(ErrorKind::kDecode, std::string("malformed header: ") + field + " too large");
      }
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t RasterOffset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      Fail(ErrorKind::kDecode, "malformed header: missing separator before pixel data");
    }
    return pos_ + 1;
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

RgbImage DecodePnm(std::span<const std::uint8_t> bytes, bool color) {
  const char magic = color ? '6' : '5';
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != magic) {
    Fail(ErrorKind::kDecode, std::string("malformed header: magic is not P") + magic);
  }
  PnmHeaderReader reader(bytes);
  const long width = reader.ReadField("width");
  const long height = reader.ReadField("height");
  const long maxval = reader.ReadField("maxval");
  if (width < 1 || height < 1) {
    Fail(ErrorKind::kDecode, "malformed header: zero width or height");
  }
  if (maxval < 1 || maxval > 255) {
    Fail(ErrorKind::kDecode, "unsupported maxval " + std::to_string(maxval));
  }
  const std::size_t offset = reader.RasterOffset();
  const std::size_t channels = color ? 3 : 1;
  const std::size_t needed = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - std::min(offset, bytes.size()) < needed) {
    Fail(ErrorKind::kDecode, "truncated pixel data: expected " + std::to_string(needed) +
                                 " bytes");
  }
  RgbImage img(static_cast<int>(width), static_cast<int>(height));
  const std::size_t n = static_cast<std::size_t>(width) * height;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      long v = bytes[offset + i * channels + (color ? c : 0)];
      if (v > maxval) {
        Fail(ErrorKind::kDecode, "sample exceeds maxval at pixel " + std::to_string(i));
      }
      if (maxval != 255) v = (v * 255 + maxval / 2) / maxval;
      img.data[i * 3 + c] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

std::uint32_t ReadLe32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t ReadLe16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

RgbImage DecodeBmp(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 54 || bytes[0] != 'B' || bytes[1] != 'M') {
    Fail(ErrorKind::kDecode, "malformed header: not a BMP file");
  }
  const std::uint32_t offset = ReadLe32(bytes, 10);
  const std::uint32_t dib_size = ReadLe32(bytes, 14);
  if (dib_size < 40) {
    Fail(ErrorKind::kDecode, "unsupported DIB header size " + std::to_string(dib_size));
  }
  const auto width = static_cast<std::int32_t>(ReadLe32(bytes, 18));
  const auto raw_height = static_cast<std::int32_t>(ReadLe32(bytes, 22));
  const std::uint16_t planes = ReadLe16(bytes, 26);
  const std::uint16_t bpp = ReadLe16(bytes, 28);
  const std::uint32_t compression = ReadLe32(bytes, 30);
  if (planes != 1) Fail(ErrorKind::kDecode, "malformed header: planes != 1");
  if (bpp != 24) Fail(ErrorKind::kDecode, "unsupported bit depth " + std::to_string(bpp));
  if (compression != 0) {
    Fail(ErrorKind::kDecode, "unsupported compression " + std::to_string(compression));
  }
  if (width < 1 || raw_height == 0 || raw_height == INT32_MIN) {
    Fail(ErrorKind::kDecode, "malformed header: bad width or height");
  }
  const bool top_down = raw_height < 0;
  const std::int32_t height = top_down ? -raw_height : raw_height;
  const std::size_t stride = (static_cast<std::size_t>(width) * 3 + 3) & ~std::size_t{3};
  const std::size_t needed = stride * static_cast<std::size_t>(height);
  if (offset > bytes.size() || bytes.size() - offset < needed) {
    Fail(ErrorKind::kDecode, "truncated pixel data: expected " + std::to_string(needed) +
                                 " bytes");
  }
  RgbImage img(width, height);
  for (int row = 0; row < height; ++row) {
    const int src_row = top_down ? row : height - 1 - row;
    const std::uint8_t* src = bytes.data() + offset + stride * src_row;
    for (int col = 0; col < width; ++col) {
      img.at(row, col, 0) = src[col * 3 + 2];
      img.at(row, col, 1) = src[col * 3 + 1];
      img.at(row, col, 2) = src[col * 3 + 0];
    }
  }
  return img;
}

void PutLe32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutLe16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint8_t RoundClampByte(double v) {
  // std::round is half-away-from-zero.
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

}  // namespace

RgbImage DecodeImage(std::span<const std::uint8_t> bytes, ImageFormat format) {
  switch (format) {
    case ImageFormat::kBmp24: return DecodeBmp(bytes);
    case ImageFormat::kPpmP6: return DecodePnm(bytes, true);
    case ImageFormat::kPgmP5: return DecodePnm(bytes, false);
  }
  Fail(ErrorKind::kArgument, "unknown image format");
}

RgbImage DecodeImage(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2) {
    if (bytes[0] == 'B' && bytes[1] == 'M') return DecodeBmp(bytes);
    if (bytes[0] == 'P' && bytes[1] == '6') return DecodePnm(bytes, true);
    if (bytes[0] == 'P' && bytes[1] == '5') return DecodePnm(bytes, false);
  }
  Fail(ErrorKind::kDecode, "malformed header: unrecognized magic bytes");
}

std::vector<std::uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RgbImage LoadImage(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  try {
    return DecodeImage(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodePpm(const RgbImage& img) {
  const std::string header =
      "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

std::vector<std::uint8_t> EncodeBmp(const RgbImage& img, bool bottom_up) {
  const std::size_t stride = (static_cast<std::size_t>(img.width) * 3 + 3) & ~std::size_t{3};
  const std::size_t raster = stride * img.height;
  std::vector<std::uint8_t> out;
  out.reserve(54 + raster);
  out.push_back('B');
  out.push_back('M');
  PutLe32(out, static_cast<std::uint32_t>(54 + raster));
  PutLe32(out, 0);
  PutLe32(out, 54);
  PutLe32(out, 40);
  PutLe32(out, static_cast<std::uint32_t>(img.width));
  PutLe32(out, static_cast<std::uint32_t>(bottom_up ? img.height : -img.height));
  PutLe16(out, 1);
  PutLe16(out, 24);
  PutLe32(out, 0);
  PutLe32(out, static_cast<std::uint32_t>(raster));
  PutLe32(out, 2835);
  PutLe32(out, 2835);
  PutLe32(out, 0);
  PutLe32(out, 0);
  for (int i = 0; i < img.height; ++i) {
    const int row = bottom_up ? img.height - 1 - i : i;
    for (int col = 0; col < img.width; ++col) {
      out.push_back(img.at(row, col, 2));
      out.push_back(img.at(row, col, 1));
      out.push_back(img.at(row, col, 0));
    }
    for (std::size_t pad = static_cast<std::size_t>(img.width) * 3; pad < stride; ++pad) {
      out.push_back(0);
    }
  }
  return out;
}

void SaveImage(const RgbImage& img, const std::string& path) {
  const bool bmp = path.size() >= 4 && (path.ends_with(".bmp") || path.ends_with(".BMP"));
  const auto bytes = bmp ? EncodeBmp(img) : EncodePpm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::uint8_t LumaBt601(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return RoundClampByte(0.299 * r + 0.587 * g + 0.114 * b);
}

GrayImage ToGrayscale(const RgbImage& img) {
  GrayImage gray(img.width, img.height);
  const std::size_t n = gray.size();
  for (std::size_t i = 0; i < n; ++i) {
    gray.data[i] = LumaBt601(img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]);
  }
  return gray;
}

GrayImage ExtractChannel(const RgbImage& img, int channel) {
  if (channel < 0 || channel > 2) Fail(ErrorKind::kArgument, "channel must be 0, 1 or 2");
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = img.data[3 * i + channel];
  return out;
}

namespace {

void CheckDownsample(int width, int height, int factor) {
  if (factor < 1) Fail(ErrorKind::kArgument, "downsample factor must be >= 1");
  if (width / factor < 1 || height / factor < 1) {
    Fail(ErrorKind::kSize, "downsampled image would be empty");
  }
}

}  // namespace

GrayImage DownsampleNearest(const GrayImage& img, int factor) {
  CheckDownsample(img.width, img.height, factor);
  if (factor == 1) return img;
  GrayImage out(img.width / factor, img.height / factor);
  for (int i = 0; i < out.height; ++i) {
    for (int j = 0; j < out.width; ++j) out.at(i, j) = img.at(i * factor, j * factor);
  }
  return out;
}

RgbImage DownsampleNearest(const RgbImage& img, int factor) {
  CheckDownsample(img.width, img.height, factor);
  if (factor == 1) return img;
  RgbImage out(img.width / factor, img.height / factor);
  for (int i = 0; i < out.height; ++i) {
    for (int j = 0; j < out.width; ++j) {
      for (int c = 0; c < 3; ++c) out.at(i, j, c) = img.at(i * factor, j * factor, c);
    }
  }
  return out;
}

std::vector<double> ResizeNearest(std::span<const double> src, int width, int height,
                                  int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) Fail(ErrorKind::kArgument, "resize to empty size");
  std::vector<double> out(static_cast<std::size_t>(new_width) * new_height);
  for (int i = 0; i < new_height; ++i) {
    const int si = static_cast<int>(static_cast<long long>(i) * height / new_height);
    for (int j = 0; j < new_width; ++j) {
      const int sj = static_cast<int>(static_cast<long long>(j) * width / new_width);
      out[static_cast<std::size_t>(i) * new_width + j] =
          src[static_cast<std::size_t>(si) * width + sj];
    }
  }
  return out;
}

}  // namespace eniqa
