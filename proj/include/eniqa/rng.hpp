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

// Deterministic random streams. Every consumer derives its own seed from the
// root seed, a purpose tag and an index, so results do not depend on thread
// scheduling or on how many draws another consumer made.

#ifndef ENIQA_RNG_HPP_
#define ENIQA_RNG_HPP_

#include <cstdint>
#include <utility>
#include <vector>

namespace eniqa {

enum class RngStream : std::uint64_t {
  kSplit = 1,
  kPlattFolds = 2,
  kNoise = 3,
  kSynthetic = 4,
  kTest = 5,
};

std::uint64_t SplitMix64(std::uint64_t& state);
std::uint64_t DeriveSeed(std::uint64_t root, RngStream stream, std::uint64_t index = 0,
                         std::uint64_t sub_index = 0);

// xoshiro256** seeded through SplitMix64. Distributions are implemented here
// rather than taken from <random> so sequences match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t Next();
  double Uniform();                          // [0, 1)
  std::uint64_t UniformInt(std::uint64_t n);  // [0, n)
  double Normal();                           // standard normal, Box-Muller

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformInt(i)]);
    }
  }

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace eniqa

#endif  // ENIQA_RNG_HPP_
