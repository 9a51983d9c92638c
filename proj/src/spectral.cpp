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

#include "eniqa/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include "eniqa/error.hpp"

namespace eniqa {

namespace {

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans are created once per (height, width, direction) and reused.
class PlanCache {
 public:
  static PlanCache& Instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan Get(int height, int width, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(height, width, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch_in(static_cast<std::size_t>(height) * width);
    std::vector<std::complex<double>> scratch_out(scratch_in.size());
    fftw_plan plan = fftw_plan_dft_2d(
        height, width, reinterpret_cast<fftw_complex*>(scratch_in.data()),
        reinterpret_cast<fftw_complex*>(scratch_out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) Fail(ErrorKind::kInternal, "FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

ComplexMap Transform(const ComplexMap& in, int sign) {
  if (in.width < 1 || in.height < 1) Fail(ErrorKind::kArgument, "transform of an empty map");
  ComplexMap out(in.width, in.height);
  fftw_plan plan = PlanCache::Instance().Get(in.height, in.width, sign);
  // FFTW_ESTIMATE plans never write to the input array.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data.data())),
                   reinterpret_cast<fftw_complex*>(out.data.data()));
  return out;
}

struct BankKey {
  int width;
  int height;
  LogGaborParams params;

  bool operator<(const BankKey& o) const {
    return std::tie(width, height, params.center_freqs, params.orientations, params.sigma_ratio,
                    params.sigma_theta) < std::tie(o.width, o.height, o.params.center_freqs,
                                                   o.params.orientations, o.params.sigma_ratio,
                                                   o.params.sigma_theta);
  }
};

class FilterBankCache {
 public:
  static FilterBankCache& Instance() {
    static FilterBankCache cache;
    return cache;
  }

  std::shared_ptr<const std::vector<RealMap>> Get(int width, int height,
                                                  const LogGaborParams& params) {
    const BankKey key{width, height, params};
    {
      std::shared_lock lock(mutex_);
      if (auto it = banks_.find(key); it != banks_.end()) return it->second;
    }
    auto bank = std::make_shared<const std::vector<RealMap>>(
        BuildFilterBank(width, height, params));
    std::unique_lock lock(mutex_);
    if (banks_.size() >= kMaxEntries) banks_.clear();
    return banks_.emplace(key, std::move(bank)).first->second;
  }

 private:
  static constexpr std::size_t kMaxEntries = 32;
  std::shared_mutex mutex_;
  std::map<BankKey, std::shared_ptr<const std::vector<RealMap>>> banks_;
};

}  // namespace

RealMap ToRealMap(const GrayImage& img) {
  RealMap out(img.width, img.height);
  std::copy(img.data.begin(), img.data.end(), out.data.begin());
  return out;
}

ComplexMap Dft2(const RealMap& map) {
  ComplexMap in(map.width, map.height);
  std::copy(map.data.begin(), map.data.end(), in.data.begin());
  return Transform(in, FFTW_FORWARD);
}

ComplexMap Dft2(const ComplexMap& map) { return Transform(map, FFTW_FORWARD); }

ComplexMap InverseDft2(const ComplexMap& spectrum) {
  ComplexMap out = Transform(spectrum, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(spectrum.width) * spectrum.height);
  for (auto& v : out.data) v *= scale;
  return out;
}

RealMap Idft2(const ComplexMap& spectrum) {
  const ComplexMap full = InverseDft2(spectrum);
  RealMap out(full.width, full.height);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = full.data[i].real();
  return out;
}

double GridFrequency(int index, int n) {
  const int k = index < (n + 1) / 2 ? index : index - n;
  return static_cast<double>(k) / n;
}

void LogGaborParams::Validate() const {
  for (const double f0 : center_freqs) {
    if (!(f0 > 0.0 && f0 <= 0.5)) {
      Fail(ErrorKind::kConfig, "log-Gabor center frequency must lie in (0, 0.5]");
    }
  }
  if (center_freqs[0] == center_freqs[1]) {
    Fail(ErrorKind::kConfig, "log-Gabor center frequencies must differ");
  }
  if (!(sigma_ratio > 0.0 && sigma_ratio < 1.0)) {
    Fail(ErrorKind::kConfig, "log-Gabor sigma_ratio must lie in (0, 1)");
  }
  if (!(sigma_theta > 0.0)) Fail(ErrorKind::kConfig, "log-Gabor sigma_theta must be > 0");
}

double WrapAngle(double delta) { return std::atan2(std::sin(delta), std::cos(delta)); }

double LogGaborGain(double f, double theta, double f0, double theta0, double sigma_ratio,
                    double sigma_theta) {
  if (f <= 0.0) return 0.0;
  const double log_ratio = std::log(f / f0);
  const double log_sigma = std::log(sigma_ratio);
  const double radial = std::exp(-(log_ratio * log_ratio) / (2.0 * log_sigma * log_sigma));
  const double d_theta = WrapAngle(theta - theta0);
  const double angular = std::exp(-(d_theta * d_theta) / (2.0 * sigma_theta * sigma_theta));
  return radial * angular;
}

std::vector<RealMap> BuildFilterBank(int width, int height, const LogGaborParams& params) {
  params.Validate();
  std::vector<RealMap> bank;
  bank.reserve(kNumSubBands);
  for (int fi = 0; fi < kNumFreqs; ++fi) {
    for (int oi = 0; oi < kNumOrients; ++oi) {
      RealMap gain(width, height);
      for (int u = 0; u < height; ++u) {
        const double fy = -GridFrequency(u, height);
        for (int v = 0; v < width; ++v) {
          const double fx = GridFrequency(v, width);
          const double f = std::hypot(fx, fy);
          const double theta = std::atan2(fy, fx);
          gain.at(u, v) = LogGaborGain(f, theta, params.center_freqs[fi],
                                       params.orientations[oi], params.sigma_ratio,
                                       params.sigma_theta);
        }
      }
      bank.push_back(std::move(gain));
    }
  }
  return bank;
}

GrayImage QuantizeMinMax(const RealMap& map) {
  GrayImage out(map.width, map.height);
  const auto [lo_it, hi_it] = std::minmax_element(map.data.begin(), map.data.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 1e-9 * std::max(1.0, std::abs(*hi_it)))) return out;
  for (std::size_t i = 0; i < map.data.size(); ++i) {
    out.data[i] = static_cast<std::uint8_t>(
        std::clamp(std::round(255.0 * (map.data[i] - lo) / range), 0.0, 255.0));
  }
  return out;
}

std::vector<SubBand> ApplyFilterBank(const GrayImage& img, const LogGaborParams& params) {
  return ApplyFilterBank(ToRealMap(img), params);
}

std::vector<SubBand> ApplyFilterBank(const RealMap& img, const LogGaborParams& params) {
  // Every filter rejects DC, so removing the mean first changes nothing
  // except making flat inputs produce exactly zero spectra.
  RealMap centered = img;
  double mean = 0.0;
  for (const double v : centered.data) mean += v;
  mean /= static_cast<double>(centered.data.size());
  for (double& v : centered.data) v -= mean;

  const ComplexMap spectrum = Dft2(centered);
  const auto bank = FilterBankCache::Instance().Get(img.width, img.height, params);
  std::vector<SubBand> bands;
  bands.reserve(kNumSubBands);
  ComplexMap filtered(img.width, img.height);
  for (int index = 0; index < kNumSubBands; ++index) {
    const RealMap& gain = (*bank)[index];
    for (std::size_t i = 0; i < filtered.data.size(); ++i) {
      filtered.data[i] = spectrum.data[i] * gain.data[i];
    }
    const ComplexMap response = InverseDft2(filtered);
    SubBand band;
    band.freq_index = index / kNumOrients;
    band.orient_index = index % kNumOrients;
    band.magnitude = RealMap(img.width, img.height);
    for (std::size_t i = 0; i < response.data.size(); ++i) {
      band.magnitude.data[i] = std::abs(response.data[i]);
    }
    band.quantized = QuantizeMinMax(band.magnitude);
    bands.push_back(std::move(band));
  }
  return bands;
}

std::vector<double> GaussianKernel(double sigma, int radius) {
  if (!(sigma > 0.0) || radius < 0) Fail(ErrorKind::kArgument, "invalid Gaussian kernel");
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-(k * k) / (2.0 * sigma * sigma));
    sum += kernel[k + radius];
  }
  for (double& v : kernel) v /= sum;
  return kernel;
}

RealMap ConvolveSeparable(const RealMap& map, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  RealMap tmp(map.width, map.height);
  for (int i = 0; i < map.height; ++i) {
    for (int j = 0; j < map.width; ++j) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * map.at(i, std::clamp(j + k, 0, map.width - 1));
      }
      tmp.at(i, j) = acc;
    }
  }
  RealMap out(map.width, map.height);
  for (int i = 0; i < map.height; ++i) {
    for (int j = 0; j < map.width; ++j) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * tmp.at(std::clamp(i + k, 0, map.height - 1), j);
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

RealMap SpectralResidualSaliency(const GrayImage& img, const SaliencyOptions& options) {
  if (img.width < kMinImageSide || img.height < kMinImageSide) {
    Fail(ErrorKind::kSize, "saliency needs at least a 16x16 image");
  }
  if (std::all_of(img.data.begin(), img.data.end(),
                  [&](std::uint8_t v) { return v == img.data.front(); })) {
    return RealMap(img.width, img.height, 1.0);
  }

  const int small_w = options.internal_width;
  const int small_h = std::max(
      1, static_cast<int>(std::lround(static_cast<double>(small_w) * img.height / img.width)));
  RealMap small(small_w, small_h);
  const RealMap full = ToRealMap(img);
  small.data = ResizeNearest(full.data, img.width, img.height, small_w, small_h);

  const ComplexMap spectrum = Dft2(small);
  RealMap log_amp(small_w, small_h);
  for (std::size_t i = 0; i < spectrum.data.size(); ++i) {
    log_amp.data[i] = std::log(std::abs(spectrum.data[i]) + options.log_floor);
  }

  // 3x3 mean of the log amplitude, wrapping around the periodic spectrum.
  ComplexMap residual_spectrum(small_w, small_h);
  for (int u = 0; u < small_h; ++u) {
    for (int v = 0; v < small_w; ++v) {
      double local = 0.0;
      for (int du = -1; du <= 1; ++du) {
        for (int dv = -1; dv <= 1; ++dv) {
          local += log_amp.at((u + du + small_h) % small_h, (v + dv + small_w) % small_w);
        }
      }
      const double residual = log_amp.at(u, v) - local / 9.0;
      const double phase = std::arg(spectrum.at(u, v));
      residual_spectrum.at(u, v) = std::polar(std::exp(residual), phase);
    }
  }

  const ComplexMap back = InverseDft2(residual_spectrum);
  RealMap energy(small_w, small_h);
  for (std::size_t i = 0; i < back.data.size(); ++i) energy.data[i] = std::norm(back.data[i]);
  const RealMap smooth = ConvolveSeparable(
      energy, GaussianKernel(options.smoothing_sigma, options.smoothing_radius));

  RealMap out(img.width, img.height);
  out.data = ResizeNearest(smooth.data, small_w, small_h, img.width, img.height);
  for (double& v : out.data) v = std::max(v, 0.0);
  return out;
}

}  // namespace eniqa
