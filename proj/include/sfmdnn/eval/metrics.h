// sfmdnn/include/sfmdnn/eval/metrics.h

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

#ifndef SFMDNN_EVAL_METRICS_H_
#define SFMDNN_EVAL_METRICS_H_

#include <optional>
#include <string>
#include <vector>

#include "sfmdnn/base/types.h"
#include "sfmdnn/corpus/corpus.h"

namespace sfm {

// Mean over all entries of the squared difference. Both arguments are
// denormalised log-Mel matrices. Throws ShapeError on a shape mismatch.
double MelMse(const RealMatrix &enhanced, const RealMatrix &reference);

// Mean over frames of the per-frame RMS of 20/ln(10) * (a - b), i.e. the
// natural-log magnitude difference expressed in dB.
double LogSpectralDistortion(const RealMatrix &a, const RealMatrix &b);

struct SegSnrConfig {
  int segment = 160;  // 10 ms at 16 kHz
  double min_db = -10.0;
  double max_db = 35.0;
};

// Average of clamped per-segment SNRs of `test` against `clean`. A trailing
// partial segment is ignored; a signal shorter than one segment is an error.
double SegmentalSnr(const std::vector<double> &test,
                    const std::vector<double> &clean,
                    const SegSnrConfig &cfg = {});

// SegmentalSnr(enhanced) - SegmentalSnr(degraded). Throws ShapeError unless
// all three have the same length.
double SegmentalSnrGain(const std::vector<double> &enhanced,
                        const std::vector<double> &degraded,
                        const std::vector<double> &clean,
                        const SegSnrConfig &cfg = {});

struct UtteranceMetrics {
  std::string id;
  bool has_noise = true;
  double snr_db = 0.0;
  double mel_mse = 0.0;
  // Only for systems that produce a waveform.
  std::optional<double> lsd;
  std::optional<double> segsnr_gain;
};

struct SystemMetrics {
  std::string system;
  std::vector<UtteranceMetrics> utterances;
};

// Scores the output directory of one batch_enhance run against the clean
// references of the manifest. mel_mse uses <dir>/features; LSD and segmental
// SNR gain use <dir>/waveforms when present, or the noisy input itself for a
// baseline run (mode read from <dir>/pipeline.txt).
SystemMetrics EvaluateSystem(const CorpusManifest &manifest,
                             const std::optional<Split> &split,
                             const std::string &system_dir,
                             const std::string &name, int jobs = 1);

std::string SystemMetricsToJson(const SystemMetrics &m);
SystemMetrics SystemMetricsFromJson(const std::string &json);
void SaveSystemMetrics(const SystemMetrics &m, const std::string &path);
SystemMetrics LoadSystemMetrics(const std::string &path);

}  // namespace sfm

#endif  // SFMDNN_EVAL_METRICS_H_
