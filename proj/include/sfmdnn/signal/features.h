// sfmdnn/include/sfmdnn/signal/features.h

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

#ifndef SFMDNN_SIGNAL_FEATURES_H_
#define SFMDNN_SIGNAL_FEATURES_H_

#include <string>
#include <vector>

#include "sfmdnn/base/kv-config.h"
#include "sfmdnn/signal/mel.h"
#include "sfmdnn/signal/stft.h"

namespace sfm {

// Front-end settings shared by corpus references, training and enhancement.
struct FeatureConfig {
  StftConfig stft;
  MelConfig mel;
  double log_floor = 1e-10;
};

// Keys: frame_len, hop, fft_size, window, n_mels, f_min, f_max, log_floor,
// mel_power. f_max defaults to sample_rate / 2.
FeatureConfig FeatureConfigFromKv(const KvConfig &kv, int sample_rate);
void FeatureConfigToKv(const FeatureConfig &f, KvConfig *kv);
extern const std::vector<std::string> kFeatureConfigKeys;

// Validates both halves and checks they agree on fft_size.
void ValidateFeatureConfig(const FeatureConfig &f);

// log_mel(stft(w)) with the configured matrix and floor.
MelFeatures ComputeLogMel(const Waveform &w, const FeatureConfig &f);

}  // namespace sfm

#endif  // SFMDNN_SIGNAL_FEATURES_H_
