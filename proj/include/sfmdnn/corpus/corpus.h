// sfmdnn/include/sfmdnn/corpus/corpus.h

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

#ifndef SFMDNN_CORPUS_CORPUS_H_
#define SFMDNN_CORPUS_CORPUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfmdnn/base/kv-config.h"
#include "sfmdnn/base/seeds.h"
#include "sfmdnn/signal/features.h"
#include "sfmdnn/signal/wave-io.h"

namespace sfm {

struct RirConfig {
  double t60 = 0.5;        // seconds
  int length = 8000;       // samples
  int direct_delay = 16;   // samples before the direct path
  // Energy ratio of the direct impulse to the exponential tail, in dB.
  double drr_db = 0.0;
  int sample_rate = 16000;
  uint64_t seed = 0;
};

void ValidateRirConfig(const RirConfig &cfg);

// Unit impulse at direct_delay followed by seeded Gaussian noise under the
// envelope exp(-3 ln(10) t / t60), t measured from the direct path, so the
// tail energy falls 60 dB over t60. The tail is scaled to the requested DRR.
Waveform SynthRir(const RirConfig &cfg);

// Full linear convolution, length len(w) + len(h) - 1 (0 if either is
// empty). Throws ConfigError on a sample-rate mismatch.
Waveform Convolve(const Waveform &w, const Waveform &h);

struct MixResult {
  Waveform mixture;       // clean + alpha * noise segment
  Waveform scaled_noise;  // alpha * noise segment
  double alpha = 1.0;
  size_t offset = 0;      // start of the noise segment
};

// Mean square over the whole signal.
double MeanPower(const std::vector<double> &x);

// Crops len(clean) samples of noise at a random offset drawn from `rng`
// (offset 0 when rng is null) and scales it so that
// 10 log10(P_clean / P_scaled_noise) = snr_db.
//   ConfigError  noise shorter than clean, non-finite snr
//   NumericError silent clean or silent noise segment
MixResult MixAtSnr(const Waveform &clean, const Waveform &noise, double snr_db,
                   Rng *rng = nullptr);

struct SpeechLikeConfig {
  double min_duration = 5.0;
  double max_duration = 8.0;
  double rms = 0.05;
  // Background floor relative to the speech RMS, dB, as in a quiet
  // close-talk recording.
  double floor_db = -35.0;
  int sample_rate = 16000;
};

// Harmonic "speech-like" signal: syllables of a random-walk-pitch harmonic
// tone shaped by moving formant resonances and a smooth amplitude envelope,
// separated by short low-level gaps.
Waveform SynthesizeSpeechLike(const SpeechLikeConfig &cfg, uint64_t seed);

enum class NoiseType { kWhite, kPink };
NoiseType ParseNoiseType(const std::string &name);

Waveform SynthesizeNoise(NoiseType type, size_t num_samples, int sample_rate,
                         uint64_t seed);

enum class Split { kTrain, kDev, kTest };
const char *SplitName(Split s);
Split ParseSplit(const std::string &name);

struct MixRecipe {
  std::string id;
  Split split = Split::kTrain;
  std::string clean_id;
  std::optional<std::string> rir_id;
  std::string noise_id;  // empty when no noise is added
  double snr_db = 0.0;
  bool has_noise = true;
  double t60 = 0.0;
  // Paths relative to the manifest directory.
  std::string clean_path, rir_path, reverberant_path, noise_path, noisy_path,
      reference_path;
};

struct CorpusManifest {
  int schema_version = 1;
  uint64_t seed = 0;
  int sample_rate = 16000;
  FeatureConfig features;
  std::vector<MixRecipe> recipes;
  std::string base_dir;  // directory holding the manifest (not serialised)

  std::vector<const MixRecipe *> BySplit(Split s) const;
  std::string Resolve(const std::string &relative) const;
};

// Manifest JSON (schema_version 1). Throws ManifestError on a malformed
// document, duplicate ids or a clean utterance shared between splits.
std::string ManifestToJson(const CorpusManifest &m);
CorpusManifest ManifestFromJson(const std::string &json,
                                const std::string &base_dir);
void SaveManifest(const CorpusManifest &m, const std::string &path);
CorpusManifest LoadManifest(const std::string &path);

// Generation config (flat key=value); see kCorpusConfigKeys for the keys.
struct CorpusConfig {
  uint64_t seed = 1;
  int sample_rate = 16000;
  int train_utterances = 60;
  int dev_utterances = 12;
  int test_utterances = 10;
  // "full": every clean utterance at every grid SNR; "cycle": one SNR per
  // utterance, cycling through the grid.
  std::string train_grid = "cycle";
  std::string dev_grid = "cycle";
  std::string test_grid = "full";
  std::vector<double> snr_grid = {-6, -3, 0, 3, 6, 9};
  bool reverb = true;
  bool add_noise = true;
  double t60 = 0.5;
  double rir_seconds = 0.6;
  int direct_delay = 16;
  double drr_db = 0.0;
  NoiseType noise_type = NoiseType::kPink;
  SpeechLikeConfig speech;
  std::vector<std::string> train_clean_wavs, dev_clean_wavs, test_clean_wavs;
  std::vector<std::string> noise_wavs;
  FeatureConfig features;
};

extern const std::vector<std::string> kCorpusConfigKeys;
CorpusConfig CorpusConfigFromKv(const KvConfig &kv);
void ValidateCorpusConfig(const CorpusConfig &cfg);

// Writes clean/, rir/, reverberant/, noise/, noisy/ (float32 WAV) and ref/
// (log-Mel features of the clean signal) under out_dir plus
// out_dir/manifest.json. Recipes are generated on up to `jobs` threads;
// output bytes do not depend on the thread count. Missing or unusable
// sources are collected and reported together in one ManifestError.
CorpusManifest BuildCorpus(const CorpusConfig &cfg, const std::string &out_dir,
                           int jobs = 1);

}  // namespace sfm

#endif  // SFMDNN_CORPUS_CORPUS_H_
