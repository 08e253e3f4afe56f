// sfmdnn/include/sfmdnn/signal/mel.h

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

#ifndef SFMDNN_SIGNAL_MEL_H_
#define SFMDNN_SIGNAL_MEL_H_

#include "sfmdnn/base/types.h"
#include "sfmdnn/signal/stft.h"

namespace sfm {

struct MelConfig {
  int n_mels = 40;
  double f_min = 0.0;
  double f_max = 8000.0;
  int sample_rate = 16000;
  int fft_size = 512;
  // Energies are |X|^2 by default; false uses |X|.
  bool use_power = true;
};

void ValidateMelConfig(const MelConfig &cfg);

// mel(f) = 2595 log10(1 + f / 700)
double HzToMel(double hz);
double MelToHz(double mel);

// n_mels centre frequencies (Hz), equally spaced on the mel scale.
std::vector<double> MelCenterFrequencies(const MelConfig &cfg);

// n_mels x (fft_size/2+1) triangular filters with unit peak, built from
// n_mels+2 mel-spaced edge frequencies and evaluated at bin frequencies
// b * sample_rate / fft_size. Throws ConfigError if any filter covers no bin.
RealMatrix MelMatrix(const MelConfig &cfg);

struct MelFeatures {
  RealMatrix data;  // frames x n_mels, natural log
};

// out[t,m] = ln(max(sum_b M[m,b] |s[t,b]|^2, floor)).
MelFeatures LogMel(const ComplexSpectrogram &s, const RealMatrix &mel_matrix,
                   double floor = 1e-10, bool use_power = true);

}  // namespace sfm

#endif  // SFMDNN_SIGNAL_MEL_H_
