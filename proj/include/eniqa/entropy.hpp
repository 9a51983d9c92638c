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

// Shannon entropies over 8-bit maps, in bits. Zero-probability terms are
// skipped so 0*log(0) contributes nothing.

#ifndef ENIQA_ENTROPY_HPP_
#define ENIQA_ENTROPY_HPP_

#include <cstdint>
#include <span>

#include "eniqa/image.hpp"

namespace eniqa {

// H1 of the empirical distribution of `values`; in [0, 8].
double Entropy1d(std::span<const std::uint8_t> values);

// H2 of the (values[i], paired[i]) joint distribution; in [0, 16]. This is
// both the two-dimensional (pixel, neighbor mean) entropy and the joint
// entropy of two aligned maps.
double Entropy2d(std::span<const std::uint8_t> values, std::span<const std::uint8_t> paired);

double JointEntropy(const GrayImage& a, const GrayImage& b);

// I(A;B) = H1(A) + H1(B) - H2(A,B); negative round-off below 1e-9 is clamped to 0.
double MutualInfo(const GrayImage& a, const GrayImage& b);

// Rounded mean of the 8 neighbors of every pixel. Out-of-range neighbor
// coordinates are clamped to the border. Requires at least 3x3.
GrayImage NeighborMeanMap(const GrayImage& img);

// Entropy2d restricted to one rectangular window of two aligned maps.
double WindowEntropy2d(const GrayImage& values, const GrayImage& paired, int row, int col,
                       int rows, int cols);

}  // namespace eniqa

#endif  // ENIQA_ENTROPY_HPP_
