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

// Frequency-domain machinery: 2-D DFT, the log-Gabor filter bank and
// spectral-residual saliency.
//
// Frequency grid: bin k of an n-point axis maps to (k < (n+1)/2 ? k : k-n)/n
// cycles/pixel. Orientation is measured counter-clockwise from the +x axis
// with y pointing up, so theta = atan2(-fy_row, fx). A 0 degree filter
// responds to intensity variation along x (vertical bars).

#ifndef ENIQA_SPECTRAL_HPP_
#define ENIQA_SPECTRAL_HPP_

#include <array>
#include <complex>
#include <numbers>
#include <vector>

#include "eniqa/image.hpp"

namespace eniqa {

struct RealMap {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  RealMap() = default;
  RealMap(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
};

struct ComplexMap {
  int width = 0;
  int height = 0;
  std::vector<std::complex<double>> data;

  ComplexMap() = default;
  ComplexMap(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h) {}

  std::complex<double>& at(int row, int col) {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  const std::complex<double>& at(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
};

RealMap ToRealMap(const GrayImage& img);

// Forward transform is unnormalized; the inverse divides by width*height.
ComplexMap Dft2(const RealMap& map);
ComplexMap Dft2(const ComplexMap& map);
ComplexMap InverseDft2(const ComplexMap& spectrum);
RealMap Idft2(const ComplexMap& spectrum);  // real part of InverseDft2

double GridFrequency(int index, int n);

struct LogGaborParams {
  // Normalized radial center frequencies (cycles/pixel), wavelength 3 then 6.
  std::array<double, 2> center_freqs = {1.0 / 3.0, 1.0 / 6.0};
  std::array<double, 4> orientations = {0.0, std::numbers::pi / 4, std::numbers::pi / 2,
                                        3 * std::numbers::pi / 4};
  double sigma_ratio = 0.55;                   // sigma_r / f0
  double sigma_theta = std::numbers::pi / 6;   // radians

  void Validate() const;
  bool operator==(const LogGaborParams&) const = default;
};

inline constexpr int kNumFreqs = 2;
inline constexpr int kNumOrients = 4;
inline constexpr int kNumSubBands = kNumFreqs * kNumOrients;

// Wrapped angular distance atan2(sin d, cos d), in [-pi, pi].
double WrapAngle(double delta);

double LogGaborGain(double f, double theta, double f0, double theta0, double sigma_ratio,
                    double sigma_theta);

// Eight gain maps on the DFT grid, index = freq * 4 + orientation.
std::vector<RealMap> BuildFilterBank(int width, int height, const LogGaborParams& params);

struct SubBand {
  int freq_index = 0;
  int orient_index = 0;
  RealMap magnitude;
  GrayImage quantized;
};

// round(255 * (m - min) / (max - min)); all zeros for a flat map.
GrayImage QuantizeMinMax(const RealMap& map);

// Modulus of the complex response to each filter, freq-major order.
std::vector<SubBand> ApplyFilterBank(const GrayImage& img, const LogGaborParams& params);
std::vector<SubBand> ApplyFilterBank(const RealMap& img, const LogGaborParams& params);

std::vector<double> GaussianKernel(double sigma, int radius);

// Separable convolution with a symmetric kernel, border pixels replicated.
RealMap ConvolveSeparable(const RealMap& map, const std::vector<double>& kernel);

struct SaliencyOptions {
  int internal_width = 64;
  double smoothing_sigma = 2.5;
  int smoothing_radius = 5;
  double log_floor = 1e-12;
};

// Spectral-residual saliency at source resolution. A constant image has no
// salient region and yields a uniform map of ones.
RealMap SpectralResidualSaliency(const GrayImage& img, const SaliencyOptions& options = {});

}  // namespace eniqa

#endif  // ENIQA_SPECTRAL_HPP_
