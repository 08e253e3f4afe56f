// sfmdnn/src/signal/mel.cc

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

#include "sfmdnn/signal/mel.h"

#include <algorithm>
#include <cmath>

#include "sfmdnn/base/errors.h"

namespace sfm {

void ValidateMelConfig(const MelConfig &cfg) {
  if (cfg.n_mels < 1) throw ConfigError("mel: n_mels must be >= 1");
  if (cfg.sample_rate <= 0) throw ConfigError("mel: sample_rate must be > 0");
  if (cfg.fft_size <= 0) throw ConfigError("mel: fft_size must be > 0");
  if (!(cfg.f_min >= 0.0 && cfg.f_min < cfg.f_max &&
        cfg.f_max <= cfg.sample_rate / 2.0))
    throw ConfigError("mel: need 0 <= f_min < f_max <= sample_rate/2");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

namespace {

std::vector<double> EdgeFrequencies(const MelConfig &cfg) {
  const double lo = HzToMel(cfg.f_min), hi = HzToMel(cfg.f_max);
  std::vector<double> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    edges[i] = MelToHz(lo + (hi - lo) * i / (cfg.n_mels + 1));
  return edges;
}

}  // namespace

std::vector<double> MelCenterFrequencies(const MelConfig &cfg) {
  ValidateMelConfig(cfg);
  auto edges = EdgeFrequencies(cfg);
  return std::vector<double>(edges.begin() + 1, edges.end() - 1);
}

RealMatrix MelMatrix(const MelConfig &cfg) {
  ValidateMelConfig(cfg);
  const int num_bins = cfg.fft_size / 2 + 1;
  const auto edges = EdgeFrequencies(cfg);
  RealMatrix m = RealMatrix::Zero(cfg.n_mels, num_bins);
  for (int k = 0; k < cfg.n_mels; ++k) {
    const double left = edges[k], center = edges[k + 1], right = edges[k + 2];
    bool any = false;
    for (int b = 0; b < num_bins; ++b) {
      const double f = static_cast<double>(b) * cfg.sample_rate / cfg.fft_size;
      double w = 0.0;
      if (f > left && f <= center)
        w = (f - left) / (center - left);
      else if (f > center && f < right)
        w = (right - f) / (right - center);
      if (w > 0.0) {
        m(k, b) = w;
        any = true;
      }
    }
    if (!any)
      throw ConfigError("mel: filter " + std::to_string(k) +
                        " covers no FFT bin; reduce n_mels or raise fft_size");
  }
  return m;
}

MelFeatures LogMel(const ComplexSpectrogram &s, const RealMatrix &mel_matrix,
                   double floor, bool use_power) {
  if (mel_matrix.cols() != s.NumBins())
    throw ShapeError("log_mel: mel matrix has " +
                     std::to_string(mel_matrix.cols()) +
                     " columns, spectrogram has " +
                     std::to_string(s.NumBins()) + " bins");
  RealMatrix energy(s.NumFrames(), s.NumBins());
  for (Eigen::Index t = 0; t < energy.rows(); ++t)
    for (Eigen::Index b = 0; b < energy.cols(); ++b)
      energy(t, b) = use_power ? std::norm(s.data(t, b)) : std::abs(s.data(t, b));
  MelFeatures out;
  out.data = energy * mel_matrix.transpose();
  out.data = out.data.unaryExpr(
      [floor](double e) { return std::log(std::max(e, floor)); });
  return out;
}

}  // namespace sfm
