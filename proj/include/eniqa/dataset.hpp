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

// Dataset manifests, content-separated splitting and a synthetic distortion
// generator.
//
// Manifest CSV:
//   # polarity=DMOS            (or MOS; required)
//   # labels=JP2K,JPEG,WN      (optional declared label set)
//   path,label,score,reference_id
//   images/img1.bmp,JP2K,23.5,parrots
// Columns may appear in any order; extra columns are ignored. Relative paths
// resolve against the manifest's directory. List distorted images only;
// pristine references are not training samples.

#ifndef ENIQA_DATASET_HPP_
#define ENIQA_DATASET_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eniqa/image.hpp"

namespace eniqa {

enum class ScorePolarity {
  kHigherIsWorse,   // DMOS
  kHigherIsBetter,  // MOS
};

const char* PolarityName(ScorePolarity polarity);  // "DMOS" / "MOS"

struct ManifestRecord {
  std::string image_path;
  std::string label;
  double score = 0.0;
  std::string reference_id;
};

struct DatasetManifest {
  std::vector<ManifestRecord> records;
  ScorePolarity polarity = ScorePolarity::kHigherIsWorse;
  std::vector<std::string> labels;  // declared or observed, sorted

  std::vector<std::string> ReferenceIds() const;  // sorted, unique
  std::size_t size() const { return records.size(); }
};

DatasetManifest ParseManifest(const std::string& path);
DatasetManifest ParseManifestText(std::string_view text, const std::string& base_dir);
void WriteManifest(std::ostream& out, const DatasetManifest& manifest);

// Keeps only the records whose label is in `labels`.
DatasetManifest FilterLabels(const DatasetManifest& manifest,
                             const std::vector<std::string>& labels);

struct ManifestSplit {
  DatasetManifest train;
  DatasetManifest test;
  std::vector<std::size_t> train_rows;  // indices into the input records
  std::vector<std::size_t> test_rows;
};

// Shuffles the sorted reference ids with `seed`; the first
// ceil(fraction * n_refs) go to training (at most n_refs - 1).
ManifestSplit SplitByReference(const DatasetManifest& manifest, double fraction,
                               std::uint64_t seed);

enum class DistortionKind { kWhiteNoise, kGaussianBlur };

const char* DistortionLabel(DistortionKind kind);  // "WN" / "GBLUR"

RgbImage SynthDistort(const RgbImage& img, DistortionKind kind, double level,
                      std::uint64_t seed);

// Procedural color texture for self-contained experiments: band-limited
// noise plus oriented gratings and a few flat-shaded shapes.
RgbImage SynthTexture(int width, int height, std::uint64_t seed);

}  // namespace eniqa

#endif  // ENIQA_DATASET_HPP_
