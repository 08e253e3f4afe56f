// sfmdnn/src/signal/features.cc

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

#include "sfmdnn/signal/features.h"

#include "sfmdnn/base/errors.h"

namespace sfm {

const std::vector<std::string> kFeatureConfigKeys = {
    "frame_len", "hop",   "fft_size",  "window",   "n_mels",
    "f_min",     "f_max", "log_floor", "mel_power"};

FeatureConfig FeatureConfigFromKv(const KvConfig &kv, int sample_rate) {
  FeatureConfig f;
  f.stft.frame_len = static_cast<int>(kv.GetInt("frame_len", f.stft.frame_len));
  f.stft.hop = static_cast<int>(kv.GetInt("hop", f.stft.hop));
  f.stft.fft_size = static_cast<int>(kv.GetInt("fft_size", f.stft.fft_size));
  f.stft.window = ParseWindowName(kv.GetString("window", "hann"));
  f.mel.n_mels = static_cast<int>(kv.GetInt("n_mels", f.mel.n_mels));
  f.mel.f_min = kv.GetDouble("f_min", 0.0);
  f.mel.f_max = kv.GetDouble("f_max", sample_rate / 2.0);
  f.mel.sample_rate = sample_rate;
  f.mel.fft_size = f.stft.fft_size;
  f.mel.use_power = kv.GetBool("mel_power", true);
  f.log_floor = kv.GetDouble("log_floor", f.log_floor);
  ValidateFeatureConfig(f);
  return f;
}

void FeatureConfigToKv(const FeatureConfig &f, KvConfig *kv) {
  const auto num = FormatDouble;
  kv->Set("frame_len", std::to_string(f.stft.frame_len));
  kv->Set("hop", std::to_string(f.stft.hop));
  kv->Set("fft_size", std::to_string(f.stft.fft_size));
  kv->Set("window", WindowName(f.stft.window));
  kv->Set("n_mels", std::to_string(f.mel.n_mels));
  kv->Set("f_min", num(f.mel.f_min));
  kv->Set("f_max", num(f.mel.f_max));
  kv->Set("log_floor", num(f.log_floor));
  kv->Set("mel_power", f.mel.use_power ? "1" : "0");
}

void ValidateFeatureConfig(const FeatureConfig &f) {
  ValidateStftConfig(f.stft);
  ValidateMelConfig(f.mel);
  if (f.mel.fft_size != f.stft.fft_size)
    throw ConfigError("features: mel fft_size differs from stft fft_size");
  if (!(f.log_floor > 0.0)) throw ConfigError("features: log_floor must be > 0");
}

MelFeatures ComputeLogMel(const Waveform &w, const FeatureConfig &f) {
  return LogMel(Stft(w, f.stft), MelMatrix(f.mel), f.log_floor,
                f.mel.use_power);
}

}  // namespace sfm
