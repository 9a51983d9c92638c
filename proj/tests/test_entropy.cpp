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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "eniqa/entropy.hpp"
#include "eniqa/error.hpp"
#include "eniqa/rng.hpp"
#include "oracles.hpp"

namespace eniqa {
namespace {

std::vector<std::uint8_t> RandomBytes(Rng& rng, std::size_t n, int levels = 256) {
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = static_cast<std::uint8_t>(rng.UniformInt(levels));
  return v;
}

GrayImage RandomMap(Rng& rng, int w, int h, int levels = 256) {
  return GrayImage(w, h, RandomBytes(rng, static_cast<std::size_t>(w) * h, levels));
}

TEST(Entropy1d, Examples) {
  EXPECT_EQ(Entropy1d(std::vector<std::uint8_t>(50, 17)), 0.0);
  std::vector<std::uint8_t> coin(100, 0);
  std::fill(coin.begin() + 50, coin.end(), 255);
  EXPECT_DOUBLE_EQ(Entropy1d(coin), 1.0);
  std::vector<std::uint8_t> all(256);
  for (int i = 0; i < 256; ++i) all[i] = static_cast<std::uint8_t>(i);
  EXPECT_NEAR(Entropy1d(all), 8.0, 1e-12);
}

TEST(Entropy1d, EmptyIsArgumentError) {
  try {
    Entropy1d({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kArgument);
  }
}

TEST(Entropy2d, Examples) {
  const std::vector<std::uint8_t> flat(64, 3);
  EXPECT_EQ(Entropy2d(flat, flat), 0.0);
  std::vector<std::uint8_t> a(64);
  std::vector<std::uint8_t> b(64);
  for (int i = 0; i < 64; ++i) {
    a[i] = static_cast<std::uint8_t>(i % 8);
    b[i] = static_cast<std::uint8_t>(i / 8);
  }
  EXPECT_NEAR(Entropy2d(a, b), 6.0, 1e-12);
}

TEST(Entropy2d, MismatchIsArgumentError) {
  const std::vector<std::uint8_t> a(4, 0);
  const std::vector<std::uint8_t> b(5, 0);
  EXPECT_THROW(Entropy2d(a, b), Error);
  EXPECT_THROW(Entropy2d({}, {}), Error);
}

TEST(Entropy2d, MatchesPairCountingOracle) {
  Rng rng(DeriveSeed(1, RngStream::kTest));
  for (int t = 0; t < 100; ++t) {
    const int side = 8 + static_cast<int>(rng.UniformInt(25));
    const auto n = static_cast<std::size_t>(side) * side;
    const int levels = 1 + static_cast<int>(rng.UniformInt(256));
    const auto a = RandomBytes(rng, n, levels);
    const auto b = RandomBytes(rng, n, levels);
    EXPECT_NEAR(Entropy2d(a, b), oracle::Entropy2d(a, b), 1e-12);
    EXPECT_NEAR(Entropy1d(a), oracle::Entropy1d(a), 1e-12);
  }
}

TEST(Entropy2d, LargeInputsUseSameDefinition) {
  Rng rng(DeriveSeed(2, RngStream::kTest));
  const auto a = RandomBytes(rng, 20000, 40);
  const auto b = RandomBytes(rng, 20000, 40);
  EXPECT_NEAR(Entropy2d(a, b), oracle::Entropy2d(a, b), 1e-11);
}

TEST(JointEntropy, Examples) {
  Rng rng(DeriveSeed(3, RngStream::kTest));
  const GrayImage x = RandomMap(rng, 16, 16);
  const GrayImage c(16, 16, std::vector<std::uint8_t>(256, 9));
  EXPECT_NEAR(JointEntropy(x, x), Entropy1d(x.data), 1e-12);
  EXPECT_NEAR(JointEntropy(x, c), Entropy1d(x.data), 1e-12);
  const GrayImage y = RandomMap(rng, 16, 16);
  EXPECT_NEAR(JointEntropy(x, y), oracle::Entropy2d(x.data, y.data), 1e-12);
  EXPECT_NEAR(JointEntropy(x, y), JointEntropy(y, x), 1e-12);
  EXPECT_THROW(JointEntropy(x, GrayImage(16, 15)), Error);
}

TEST(MutualInfo, Examples) {
  Rng rng(DeriveSeed(4, RngStream::kTest));
  const GrayImage x = RandomMap(rng, 32, 32);
  const GrayImage c(32, 32, std::vector<std::uint8_t>(1024, 200));
  EXPECT_NEAR(MutualInfo(x, x), Entropy1d(x.data), 1e-12);
  EXPECT_EQ(MutualInfo(x, c), 0.0);
  const GrayImage a = RandomMap(rng, 64, 64);
  const GrayImage b = RandomMap(rng, 64, 64);
  EXPECT_NEAR(MutualInfo(a, b), oracle::MutualInfo(a.data, b.data), 1e-9);
  EXPECT_GT(MutualInfo(a, b), 0.0);  // finite-sample bias
  EXPECT_THROW(MutualInfo(a, x), Error);
}

TEST(MutualInfo, InvariantsOnRandomMaps) {
  Rng rng(DeriveSeed(5, RngStream::kTest));
  for (int t = 0; t < 200; ++t) {
    const int w = 4 + static_cast<int>(rng.UniformInt(30));
    const int h = 4 + static_cast<int>(rng.UniformInt(30));
    const int levels = 1 + static_cast<int>(rng.UniformInt(64));
    const GrayImage a = RandomMap(rng, w, h, levels);
    GrayImage b = RandomMap(rng, w, h, levels);
    for (std::size_t i = 0; i < b.data.size(); i += 3) b.data[i] = a.data[i];
    const double ab = MutualInfo(a, b);
    EXPECT_NEAR(ab, MutualInfo(b, a), 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, std::min(Entropy1d(a.data), Entropy1d(b.data)) + 1e-9);
    const double h1 = Entropy1d(a.data);
    const double h2 = Entropy2d(a.data, b.data);
    EXPECT_GE(h1, 0.0);
    EXPECT_LE(h1, 8.0);
    EXPECT_GE(h2, h1 - 1e-12);
    EXPECT_LE(h2, 16.0);
  }
}

TEST(NeighborMeanMap, ConstantImageIsFixed) {
  const GrayImage img(5, 4, std::vector<std::uint8_t>(20, 77));
  EXPECT_EQ(NeighborMeanMap(img), img);
}

TEST(NeighborMeanMap, CenterOfRampIsFour) {
  GrayImage img(3, 3);
  for (int i = 0; i < 9; ++i) img.data[i] = static_cast<std::uint8_t>(i);
  EXPECT_EQ(NeighborMeanMap(img).at(1, 1), 4);
}

TEST(NeighborMeanMap, ImpulseUsesClampedOffsets) {
  GrayImage img(3, 3);
  img.at(1, 1) = 8;
  const GrayImage out = NeighborMeanMap(img);
  EXPECT_EQ(out.at(1, 1), 0);
  // Corner (0,0): clamped offsets reach (1,1) exactly once -> round(8/8) = 1.
  EXPECT_EQ(out.at(0, 0), 1);
  EXPECT_EQ(out.data, oracle::NeighborMeans(img.data, 3, 3));
}

TEST(NeighborMeanMap, MatchesClampedOracle) {
  Rng rng(DeriveSeed(6, RngStream::kTest));
  for (int t = 0; t < 50; ++t) {
    const int w = 3 + static_cast<int>(rng.UniformInt(20));
    const int h = 3 + static_cast<int>(rng.UniformInt(20));
    const GrayImage img = RandomMap(rng, w, h);
    EXPECT_EQ(NeighborMeanMap(img).data, oracle::NeighborMeans(img.data, w, h));
  }
}

TEST(NeighborMeanMap, TooSmallIsSizeError) {
  try {
    NeighborMeanMap(GrayImage(2, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSize);
  }
}

TEST(WindowEntropy2d, MatchesCopiedWindow) {
  Rng rng(DeriveSeed(7, RngStream::kTest));
  const GrayImage img = RandomMap(rng, 40, 30, 32);
  const GrayImage means = NeighborMeanMap(img);
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> b;
  for (int i = 8; i < 16; ++i) {
    for (int j = 24; j < 32; ++j) {
      a.push_back(img.at(i, j));
      b.push_back(means.at(i, j));
    }
  }
  EXPECT_NEAR(WindowEntropy2d(img, means, 8, 24, 8, 8), oracle::Entropy2d(a, b), 1e-12);
  EXPECT_THROW(WindowEntropy2d(img, means, 25, 0, 8, 8), Error);
}

}  // namespace
}  // namespace eniqa
