// sfmdnn/src/corpus/synth.cc

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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfmdnn/base/errors.h"
#include "sfmdnn/corpus/corpus.h"

namespace sfm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Formant {
  double start, end, bandwidth, gain;
};

// Smooth spectral envelope: Gaussian formant bumps over a -6 dB/octave-ish
// tilt, with a small floor between formants.
double EnvelopeGain(double f, const std::vector<Formant> &formants, double u) {
  double g = 0.03;
  for (const auto &fm : formants) {
    const double centre = fm.start + (fm.end - fm.start) * u;
    const double d = (f - centre) / fm.bandwidth;
    g += fm.gain * std::exp(-0.5 * d * d);
  }
  return g / (1.0 + f / 500.0);
}

}  // namespace

Waveform SynthesizeSpeechLike(const SpeechLikeConfig &cfg, uint64_t seed) {
  if (cfg.sample_rate <= 0) throw ConfigError("speech: sample_rate must be > 0");
  if (!(cfg.min_duration > 0.0 && cfg.max_duration >= cfg.min_duration))
    throw ConfigError("speech: need 0 < min_duration <= max_duration");
  if (!(cfg.rms > 0.0)) throw ConfigError("speech: rms must be > 0");

  Rng rng(seed);
  const double fs = cfg.sample_rate;
  const size_t total = static_cast<size_t>(
      std::lround(rng.Uniform(cfg.min_duration, cfg.max_duration) * fs));
  Waveform w;
  w.sample_rate = cfg.sample_rate;
  w.samples.assign(total, 0.0);

  const double nyquist_guard = std::min(7800.0, 0.49 * fs);
  double f0 = rng.Uniform(100.0, 220.0);
  const double f0_centre = f0;
  double phase = 0.0;
  size_t pos = static_cast<size_t>(rng.Uniform(0.05, 0.15) * fs);
  constexpr int kBlock = 80;
  std::vector<double> amps;

  while (pos < total) {
    const size_t syl_len = static_cast<size_t>(rng.Uniform(0.12, 0.30) * fs);
    const size_t gap = static_cast<size_t>(rng.Uniform(0.03, 0.15) * fs);
    const double peak = rng.Uniform(0.5, 1.0);
    const std::vector<Formant> formants = {
        {rng.Uniform(300, 800), rng.Uniform(300, 800), rng.Uniform(70, 110), 1.0},
        {rng.Uniform(900, 2200), rng.Uniform(900, 2200), rng.Uniform(90, 140), 0.6},
        {rng.Uniform(2400, 3200), rng.Uniform(2400, 3200), rng.Uniform(120, 200), 0.3}};

    // Fricative onset: a short burst of first-differenced (high-pass) noise.
    if (rng.Bernoulli(0.5)) {
      const size_t burst = static_cast<size_t>(rng.Uniform(0.02, 0.06) * fs);
      double prev = 0.0;
      const double level = 0.15 * peak;
      for (size_t i = 0; i < burst && pos + i < total; ++i) {
        const double white = rng.Gaussian();
        const double u = static_cast<double>(i) / burst;
        w.samples[pos + i] += level * std::sin(std::numbers::pi * u) * (white - prev);
        prev = white;
      }
      pos += burst / 2;
    }

    const size_t end = std::min(total, pos + syl_len);
    for (size_t n = pos; n < end; ++n) {
      const size_t k = n - pos;
      const double u = static_cast<double>(k) / syl_len;
      if (k % kBlock == 0) {
        // Pitch random walk, pulled gently back toward the speaker's centre.
        f0 *= std::exp(0.02 * rng.Gaussian() + 0.01 * std::log(f0_centre / f0));
        f0 = std::clamp(f0, 80.0, 300.0);
        const int num_harmonics = static_cast<int>(nyquist_guard / f0);
        amps.resize(num_harmonics);
        for (int h = 0; h < num_harmonics; ++h)
          amps[h] = EnvelopeGain((h + 1) * f0, formants, u);
      }
      phase += kTwoPi * f0 / fs;
      if (phase > kTwoPi) phase -= kTwoPi;
      double s = 0.0;
      for (size_t h = 0; h < amps.size(); ++h) s += amps[h] * std::sin((h + 1) * phase);
      // Raised-cosine attack and release over the first/last 30% of the
      // syllable.
      double env = 1.0;
      if (u < 0.3)
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * u / 0.3);
      else if (u > 0.7)
        env = 0.5 - 0.5 * std::cos(std::numbers::pi * (1.0 - u) / 0.3);
      w.samples[n] += peak * env * s;
    }
    pos += syl_len + gap;
  }

  const double rms = std::sqrt(MeanPower(w.samples));
  const double gain = rms > 0.0 ? cfg.rms / rms : 0.0;
  const double floor_std = cfg.rms * std::pow(10.0, cfg.floor_db / 20.0);
  for (double &v : w.samples) v = v * gain + floor_std * rng.Gaussian();
  return w;
}

NoiseType ParseNoiseType(const std::string &name) {
  if (name == "white") return NoiseType::kWhite;
  if (name == "pink") return NoiseType::kPink;
  throw ConfigError("unknown noise_type '" + name + "' (expected white or pink)");
}

Waveform SynthesizeNoise(NoiseType type, size_t num_samples, int sample_rate,
                         uint64_t seed) {
  Rng rng(seed);
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(num_samples);
  // Paul Kellet's pink filter.
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  for (size_t i = 0; i < num_samples; ++i) {
    const double white = rng.Gaussian();
    if (type == NoiseType::kWhite) {
      w.samples[i] = white;
      continue;
    }
    b0 = 0.99886 * b0 + white * 0.0555179;
    b1 = 0.99332 * b1 + white * 0.0750759;
    b2 = 0.96900 * b2 + white * 0.1538520;
    b3 = 0.86650 * b3 + white * 0.3104856;
    b4 = 0.55000 * b4 + white * 0.5329522;
    b5 = -0.7616 * b5 - white * 0.0168980;
    w.samples[i] = b0 + b1 + b2 + b3 + b4 + b5 + b6 + white * 0.5362;
    b6 = white * 0.115926;
  }
  const double rms = std::sqrt(MeanPower(w.samples));
  if (rms > 0.0)
    for (double &v : w.samples) v *= 0.1 / rms;
  return w;
}

}  // namespace sfm
