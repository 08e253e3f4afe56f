// sfmdnn/include/sfmdnn/pipeline/pipeline.h

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

#ifndef SFMDNN_PIPELINE_PIPELINE_H_
#define SFMDNN_PIPELINE_PIPELINE_H_

#include <memory>
#include <optional>
#include <string>

#include "sfmdnn/corpus/corpus.h"
#include "sfmdnn/dnn/model.h"
#include "sfmdnn/signal/features.h"
#include "sfmdnn/wpe/wpe.h"

namespace sfm {

enum class PipelineMode { kBaseline, kWpeOnly, kDnnOnly, kWpeDnn };

const char *PipelineModeName(PipelineMode m);
PipelineMode ParsePipelineMode(const std::string &name);
bool UsesWpe(PipelineMode m);
bool UsesDnn(PipelineMode m);

struct PipelineConfig {
  PipelineMode mode = PipelineMode::kBaseline;
  std::shared_ptr<const MlpModel> model;  // required by dnn modes
  WpeConfig wpe;
  FeatureConfig features;
  // wpe_dnn only: the network sees stft(istft(wpe(.))), i.e. the WPE
  // waveform re-analysed. When false the WPE spectrogram is used directly;
  // its inconsistent frames measurably hurt the network.
  bool resynthesize = true;
  int wpe_threads = 1;
};

// Throws ShapeError / ConfigError when a dnn mode lacks a model or the model
// does not fit the feature configuration.
void ValidatePipelineConfig(const PipelineConfig &cfg);

struct EnhanceResult {
  MelFeatures features;             // log-Mel domain
  std::optional<Waveform> enhanced; // WPE output for wpe modes
};

// baseline  log_mel(stft(w))
// wpe_only  xhat = istft(wpe(stft(w))); log_mel(stft(xhat))
// dnn_only  map_features(log_magnitude(stft(w)))
// wpe_dnn   map_features(log_magnitude(stft(xhat))), or of wpe(stft(w))
//           itself when resynthesize is off
// The WPE waveform is trimmed or zero-padded to len(w).
EnhanceResult EnhanceUtterance(const Waveform &w, const PipelineConfig &cfg);

// Log-magnitude spectrum fed to the network, with or without WPE in front.
// Shared by enhancement and training so both see identical inputs.
LogSpectrogram NetworkInput(const Waveform &w, const FeatureConfig &features,
                            const WpeConfig *wpe, bool resynthesize = true,
                            int wpe_threads = 1);

// istft of a WPE result, length-matched to `length`.
Waveform ResynthesizeWpe(const ComplexSpectrogram &enhanced, int sample_rate,
                         size_t length);

struct BatchSummary {
  int succeeded = 0;
  int failed = 0;
  std::string config_hash;
};

// Enhances every recipe of `split` (all splits when null) from its noisy
// waveform. Writes <out>/pipeline.txt (PipelineConfigText),
// <out>/features/<id>.sfmf, <out>/waveforms/<id>.wav for
// wpe modes, and <out>/run.jsonl with one JSON line per utterance (id,
// status, seconds, frames, config_hash, error). Failures are logged and the
// batch continues.
BatchSummary BatchEnhance(const CorpusManifest &manifest,
                          const std::optional<Split> &split,
                          const PipelineConfig &cfg, const std::string &out_dir,
                          int jobs = 1);

// Text identifying everything that determines the output bytes.
std::string PipelineConfigText(const PipelineConfig &cfg);

}  // namespace sfm

#endif  // SFMDNN_PIPELINE_PIPELINE_H_
