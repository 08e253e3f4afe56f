// sfmdnn/src/signal/stft.cc

// Copyright 2026  The sfmdnn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sfmdnn/signal/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfmdnn/base/errors.h"
#include "sfmdnn/signal/fft.h"

namespace sfm {

namespace {

// Relative floor of the overlap-add normalizer over one hop period.
constexpr double kMinOverlapRatio = 1e-3;

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

int StftConfig::NumFrames(size_t num_samples) const {
  if (num_samples < static_cast<size_t>(frame_len)) return 0;
  return 1 + static_cast<int>((num_samples - frame_len) / hop);
}

void ValidateStftConfig(const StftConfig &cfg) {
  if (cfg.hop <= 0) throw ConfigError("stft: hop must be > 0");
  if (cfg.frame_len < cfg.hop) throw ConfigError("stft: hop must be <= frame_len");
  if (cfg.fft_size < cfg.frame_len)
    throw ConfigError("stft: fft_size must be >= frame_len");
  if (!IsPowerOfTwo(cfg.fft_size))
    throw ConfigError("stft: fft_size must be a power of two");
}

std::vector<double> MakeWindow(WindowType type, int n) {
  std::vector<double> w(n, 1.0);
  const double a = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    switch (type) {
      case WindowType::kHann:
        w[i] = 0.5 - 0.5 * std::cos(a * i);
        break;
      case WindowType::kHamming:
        w[i] = 0.54 - 0.46 * std::cos(a * i);
        break;
      case WindowType::kRectangular:
        break;
    }
  }
  return w;
}

const char *WindowName(WindowType type) {
  switch (type) {
    case WindowType::kHann:
      return "hann";
    case WindowType::kHamming:
      return "hamming";
    case WindowType::kRectangular:
      return "rectangular";
  }
  return "unknown";
}

WindowType ParseWindowName(const std::string &name) {
  if (name == "hann") return WindowType::kHann;
  if (name == "hamming") return WindowType::kHamming;
  if (name == "rectangular") return WindowType::kRectangular;
  throw ConfigError("stft: unknown window '" + name + "'");
}

ComplexSpectrogram Stft(const Waveform &w, const StftConfig &cfg) {
  ValidateStftConfig(cfg);
  const int num_frames = cfg.NumFrames(w.size());
  ComplexSpectrogram out;
  out.config = cfg;
  out.data.resize(num_frames, cfg.NumBins());
  if (num_frames == 0) return out;

  const auto window = MakeWindow(cfg.window, cfg.frame_len);
  RealFft fft(cfg.fft_size);
  std::vector<double> frame(cfg.fft_size, 0.0);
  std::vector<Complex> bins(cfg.NumBins());
  for (int t = 0; t < num_frames; ++t) {
    const size_t start = static_cast<size_t>(t) * cfg.hop;
    for (int i = 0; i < cfg.frame_len; ++i)
      frame[i] = w.samples[start + i] * window[i];
    fft.Forward(frame, bins);
    for (int b = 0; b < cfg.NumBins(); ++b) out.data(t, b) = bins[b];
  }
  return out;
}

void CheckOverlapAddInvertible(const StftConfig &cfg) {
  ValidateStftConfig(cfg);
  const auto window = MakeWindow(cfg.window, cfg.frame_len);
  std::vector<double> sum(cfg.hop, 0.0);
  for (int i = 0; i < cfg.frame_len; ++i) sum[i % cfg.hop] += window[i] * window[i];
  const auto [lo, hi] = std::minmax_element(sum.begin(), sum.end());
  if (!(*hi > 0.0) || *lo < kMinOverlapRatio * *hi)
    throw ConfigError(std::string("istft: ") + WindowName(cfg.window) +
                      " window with hop " + std::to_string(cfg.hop) +
                      " and frame_len " + std::to_string(cfg.frame_len) +
                      " does not satisfy overlap-add reconstruction");
}

Waveform Istft(const ComplexSpectrogram &s, int sample_rate) {
  const StftConfig &cfg = s.config;
  CheckOverlapAddInvertible(cfg);
  if (s.NumBins() != cfg.NumBins())
    throw ShapeError("istft: bin count does not match config");
  Waveform out;
  out.sample_rate = sample_rate;
  const int num_frames = s.NumFrames();
  if (num_frames == 0) return out;

  const size_t len =
      static_cast<size_t>(num_frames - 1) * cfg.hop + cfg.frame_len;
  std::vector<double> acc(len, 0.0), norm(len, 0.0);
  const auto window = MakeWindow(cfg.window, cfg.frame_len);
  RealFft fft(cfg.fft_size);
  std::vector<Complex> bins(cfg.NumBins());
  std::vector<double> frame(cfg.fft_size);
  for (int t = 0; t < num_frames; ++t) {
    for (int b = 0; b < cfg.NumBins(); ++b) bins[b] = s.data(t, b);
    fft.Inverse(bins, frame);
    const size_t start = static_cast<size_t>(t) * cfg.hop;
    for (int i = 0; i < cfg.frame_len; ++i) {
      acc[start + i] += frame[i] * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }
  const double peak = *std::max_element(norm.begin(), norm.end());
  const double tiny = 1e-10 * peak;
  out.samples.resize(len);
  for (size_t n = 0; n < len; ++n)
    out.samples[n] = norm[n] > tiny ? acc[n] / norm[n] : 0.0;
  return out;
}

LogSpectrogram LogMagnitude(const ComplexSpectrogram &s, double floor) {
  if (!(floor > 0.0)) throw ConfigError("log_magnitude: floor must be > 0");
  LogSpectrogram out;
  out.data.resize(s.NumFrames(), s.NumBins());
  for (Eigen::Index t = 0; t < s.data.rows(); ++t)
    for (Eigen::Index b = 0; b < s.data.cols(); ++b)
      out.data(t, b) = std::log(std::max(std::abs(s.data(t, b)), floor));
  return out;
}

}  // namespace sfm
