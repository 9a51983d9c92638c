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

#include "eniqa/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "eniqa/error.hpp"
#include "eniqa/numfmt.hpp"
#include "eniqa/rng.hpp"
#include "eniqa/spectral.hpp"

namespace eniqa {

const char* PolarityName(ScorePolarity polarity) {
  return polarity == ScorePolarity::kHigherIsWorse ? "DMOS" : "MOS";
}

std::vector<std::string> DatasetManifest::ReferenceIds() const {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.reference_id);
  return {ids.begin(), ids.end()};
}

namespace {

std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool IsToken(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

[[noreturn]] void RowError(int row, const std::string& message) {
  Fail(ErrorKind::kParse, "manifest row " + std::to_string(row) + ": " + message);
}

}  // namespace

DatasetManifest ParseManifest(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  const std::string dir = std::filesystem::path(path).parent_path().generic_string();
  try {
    return ParseManifestText(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                              bytes.size()),
                             dir);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

DatasetManifest ParseManifestText(std::string_view text, const std::string& base_dir) {
  DatasetManifest manifest;
  bool have_polarity = false;
  std::vector<std::string> declared;
  int col_path = -1, col_label = -1, col_score = -1, col_ref = -1;
  bool have_header = false;
  std::set<std::string> seen_paths;
  std::set<std::string> observed;

  int row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++row;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      const std::string_view body = Trim(line.substr(1));
      if (body.starts_with("polarity=")) {
        const std::string_view value = Trim(body.substr(9));
        if (value == "DMOS") {
          manifest.polarity = ScorePolarity::kHigherIsWorse;
        } else if (value == "MOS") {
          manifest.polarity = ScorePolarity::kHigherIsBetter;
        } else {
          RowError(row, "unknown polarity '" + std::string(value) + "'");
        }
        have_polarity = true;
      } else if (body.starts_with("labels=")) {
        for (auto& label : SplitCsv(body.substr(7))) {
          if (!IsToken(label)) RowError(row, "bad label token '" + label + "'");
          declared.push_back(label);
        }
      }
      continue;
    }
    const auto fields = SplitCsv(line);
    if (!have_header) {
      for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
        if (fields[i] == "path") col_path = i;
        else if (fields[i] == "label") col_label = i;
        else if (fields[i] == "score") col_score = i;
        else if (fields[i] == "reference_id") col_ref = i;
      }
      for (const auto& [col, name] : {std::pair{col_path, "path"}, std::pair{col_label, "label"},
                                      std::pair{col_score, "score"},
                                      std::pair{col_ref, "reference_id"}}) {
        if (col < 0) RowError(row, std::string("missing column '") + name + "'");
      }
      have_header = true;
      continue;
    }
    const int needed = std::max({col_path, col_label, col_score, col_ref}) + 1;
    if (static_cast<int>(fields.size()) < needed) {
      RowError(row, "expected at least " + std::to_string(needed) + " fields");
    }
    ManifestRecord rec;
    std::filesystem::path p(fields[col_path]);
    if (p.empty()) RowError(row, "empty path");
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    rec.image_path = p.lexically_normal().generic_string();
    rec.label = fields[col_label];
    if (!IsToken(rec.label)) RowError(row, "bad label '" + rec.label + "'");
    if (!ParseDouble(fields[col_score], rec.score) || !std::isfinite(rec.score)) {
      RowError(row, "unparsable score '" + fields[col_score] + "'");
    }
    rec.reference_id = fields[col_ref];
    if (rec.reference_id.empty()) RowError(row, "empty reference_id");
    if (!seen_paths.insert(rec.image_path).second) {
      RowError(row, "duplicate path '" + rec.image_path + "'");
    }
    observed.insert(rec.label);
    manifest.records.push_back(std::move(rec));
  }
  if (!have_header) Fail(ErrorKind::kParse, "manifest has no header row");
  if (!have_polarity) Fail(ErrorKind::kParse, "manifest lacks '# polarity=DMOS|MOS'");
  if (!declared.empty()) {
    const std::set<std::string> allowed(declared.begin(), declared.end());
    for (const auto& label : observed) {
      if (!allowed.count(label)) {
        Fail(ErrorKind::kParse, "label '" + label + "' is not in the declared label set");
      }
    }
    manifest.labels.assign(allowed.begin(), allowed.end());
  } else {
    manifest.labels.assign(observed.begin(), observed.end());
  }
  return manifest;
}

void WriteManifest(std::ostream& out, const DatasetManifest& manifest) {
  out << "# polarity=" << PolarityName(manifest.polarity) << "\n";
  if (!manifest.labels.empty()) {
    out << "# labels=";
    for (std::size_t i = 0; i < manifest.labels.size(); ++i) {
      out << (i ? "," : "") << manifest.labels[i];
    }
    out << "\n";
  }
  out << "path,label,score,reference_id\n";
  for (const auto& r : manifest.records) {
    out << r.image_path << ',' << r.label << ',' << FormatDouble(r.score) << ','
        << r.reference_id << "\n";
  }
}

DatasetManifest FilterLabels(const DatasetManifest& manifest,
                             const std::vector<std::string>& labels) {
  const std::set<std::string> keep(labels.begin(), labels.end());
  DatasetManifest out;
  out.polarity = manifest.polarity;
  for (const auto& r : manifest.records) {
    if (keep.count(r.label)) out.records.push_back(r);
  }
  for (const auto& l : manifest.labels) {
    if (keep.count(l)) out.labels.push_back(l);
  }
  return out;
}

ManifestSplit SplitByReference(const DatasetManifest& manifest, double fraction,
                               std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    Fail(ErrorKind::kConfig, "split fraction must lie in (0, 1)");
  }
  std::vector<std::string> refs = manifest.ReferenceIds();
  if (refs.size() < 2) Fail(ErrorKind::kArgument, "split needs at least 2 reference ids");
  Rng rng(seed);
  rng.Shuffle(refs);
  const double want = std::ceil(fraction * static_cast<double>(refs.size()) - 1e-9);
  const std::size_t n_train =
      std::clamp<std::size_t>(static_cast<std::size_t>(want), 1, refs.size() - 1);
  const std::set<std::string> train_refs(refs.begin(), refs.begin() + n_train);

  ManifestSplit split;
  split.train.polarity = split.test.polarity = manifest.polarity;
  split.train.labels = split.test.labels = manifest.labels;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& r = manifest.records[i];
    if (train_refs.count(r.reference_id)) {
      split.train.records.push_back(r);
      split.train_rows.push_back(i);
    } else {
      split.test.records.push_back(r);
      split.test_rows.push_back(i);
    }
  }
  return split;
}

const char* DistortionLabel(DistortionKind kind) {
  return kind == DistortionKind::kWhiteNoise ? "WN" : "GBLUR";
}

RgbImage SynthDistort(const RgbImage& img, DistortionKind kind, double level,
                      std::uint64_t seed) {
  if (!(level > 0.0)) Fail(ErrorKind::kArgument, "distortion level must be > 0");
  RgbImage out(img.width, img.height);
  if (kind == DistortionKind::kWhiteNoise) {
    Rng rng(seed);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
      const double v = img.data[i] + level * rng.Normal();
      out.data[i] = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
    }
    return out;
  }
  const auto kernel = GaussianKernel(level, static_cast<int>(std::ceil(3.0 * level)));
  for (int c = 0; c < 3; ++c) {
    RealMap channel(img.width, img.height);
    for (std::size_t i = 0; i < channel.data.size(); ++i) channel.data[i] = img.data[3 * i + c];
    const RealMap blurred = ConvolveSeparable(channel, kernel);
    for (std::size_t i = 0; i < blurred.data.size(); ++i) {
      out.data[3 * i + c] =
          static_cast<std::uint8_t>(std::clamp(std::round(blurred.data[i]), 0.0, 255.0));
    }
  }
  return out;
}

RgbImage SynthTexture(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::array<std::vector<double>, 3> planes;
  for (auto& p : planes) p.assign(n, 0.0);

  // Shared luminance structure with per-channel tint so channels correlate.
  const int components = 48;
  const double tint[3] = {0.6 + 0.4 * rng.Uniform(), 0.6 + 0.4 * rng.Uniform(),
                          0.6 + 0.4 * rng.Uniform()};
  for (int k = 0; k < components; ++k) {
    const double f = std::exp(std::log(1.0 / 96.0) + rng.Uniform() * std::log(96.0 * 0.3));
    const double theta = rng.Uniform() * std::numbers::pi;
    const double phase = rng.Uniform() * 2.0 * std::numbers::pi;
    const double amp = 0.02 / f;  // 1/f spectrum
    const double fx = f * std::cos(theta);
    const double fy = f * std::sin(theta);
    const int channel_bias = static_cast<int>(rng.UniformInt(3));
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        const double v = amp * std::sin(2.0 * std::numbers::pi * (fx * j + fy * i) + phase);
        const std::size_t idx = static_cast<std::size_t>(i) * width + j;
        for (int c = 0; c < 3; ++c) {
          planes[c][idx] += v * tint[c] * (c == channel_bias ? 1.3 : 1.0);
        }
      }
    }
  }
  // Flat-shaded ellipses give sharp edges.
  const int shapes = 4 + static_cast<int>(rng.UniformInt(4));
  for (int s = 0; s < shapes; ++s) {
    const double cy = rng.Uniform() * height;
    const double cx = rng.Uniform() * width;
    const double ry = (0.08 + 0.2 * rng.Uniform()) * height;
    const double rx = (0.08 + 0.2 * rng.Uniform()) * width;
    const double color[3] = {rng.Uniform() * 2 - 1, rng.Uniform() * 2 - 1, rng.Uniform() * 2 - 1};
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        const double dy = (i - cy) / ry;
        const double dx = (j - cx) / rx;
        if (dx * dx + dy * dy <= 1.0) {
          const std::size_t idx = static_cast<std::size_t>(i) * width + j;
          for (int c = 0; c < 3; ++c) planes[c][idx] = 0.5 * planes[c][idx] + color[c];
        }
      }
    }
  }
  double lo = planes[0][0];
  double hi = planes[0][0];
  for (const auto& p : planes) {
    for (const double v : p) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  RgbImage img(width, height);
  const double range = hi > lo ? hi - lo : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      img.data[3 * i + c] =
          static_cast<std::uint8_t>(std::lround(20.0 + 215.0 * (planes[c][i] - lo) / range));
    }
  }
  return img;
}

}  // namespace eniqa
