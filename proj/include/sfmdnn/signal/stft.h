// sfmdnn/include/sfmdnn/signal/stft.h

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

#ifndef SFMDNN_SIGNAL_STFT_H_
#define SFMDNN_SIGNAL_STFT_H_

#include <vector>

#include "sfmdnn/base/types.h"
#include "sfmdnn/signal/wave-io.h"

namespace sfm {

enum class WindowType { kHann, kHamming, kRectangular };

// Defaults: 25 ms / 10 ms at 16 kHz, 512-point FFT, periodic Hann.
struct StftConfig {
  int frame_len = 400;
  int hop = 160;
  int fft_size = 512;
  WindowType window = WindowType::kHann;

  int NumBins() const { return fft_size / 2 + 1; }
  // Frames produced for a signal of `num_samples` (no padding, no centering).
  int NumFrames(size_t num_samples) const;
  bool operator==(const StftConfig &) const = default;
};

// Throws ConfigError unless 0 < hop <= frame_len <= fft_size and fft_size is
// a power of two.
void ValidateStftConfig(const StftConfig &cfg);

// Periodic windows of length n.
std::vector<double> MakeWindow(WindowType type, int n);

const char *WindowName(WindowType type);
WindowType ParseWindowName(const std::string &name);

struct ComplexSpectrogram {
  ComplexMatrix data;  // frames x bins
  StftConfig config;

  int NumFrames() const { return static_cast<int>(data.rows()); }
  int NumBins() const { return static_cast<int>(data.cols()); }
};

struct LogSpectrogram {
  RealMatrix data;  // frames x bins, natural log of magnitude
};

// Frame t covers samples [t*hop, t*hop + frame_len), windowed and zero padded
// to fft_size. Only bins 0..fft_size/2 are kept.
ComplexSpectrogram Stft(const Waveform &w, const StftConfig &cfg);

// Weighted overlap-add with the analysis window used again for synthesis,
// normalized pointwise by sum_k w^2(n - k*hop). Output length is
// (T-1)*hop + frame_len. Throws ConfigError when the normalizer is not
// bounded away from zero over a hop period (window/hop pair not invertible).
Waveform Istft(const ComplexSpectrogram &s, int sample_rate);

// Throws ConfigError if the window/hop pair cannot be inverted by Istft.
void CheckOverlapAddInvertible(const StftConfig &cfg);

// out = ln(max(|s|, floor)).
LogSpectrogram LogMagnitude(const ComplexSpectrogram &s, double floor = 1e-10);

}  // namespace sfm

#endif  // SFMDNN_SIGNAL_STFT_H_
