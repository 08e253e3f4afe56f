// sfmdnn/src/corpus/rir.cc

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
#include "sfmdnn/signal/fft.h"

namespace sfm {

void ValidateRirConfig(const RirConfig &cfg) {
  if (!(cfg.t60 > 0.0) || !std::isfinite(cfg.t60))
    throw ConfigError("rir: t60 must be > 0");
  if (cfg.direct_delay < 0) throw ConfigError("rir: direct_delay must be >= 0");
  if (cfg.length <= cfg.direct_delay)
    throw ConfigError("rir: length must exceed direct_delay");
  if (cfg.sample_rate <= 0) throw ConfigError("rir: sample_rate must be > 0");
  if (!std::isfinite(cfg.drr_db)) throw ConfigError("rir: drr_db must be finite");
}

Waveform SynthRir(const RirConfig &cfg) {
  ValidateRirConfig(cfg);
  Waveform h;
  h.sample_rate = cfg.sample_rate;
  h.samples.assign(cfg.length, 0.0);
  h.samples[cfg.direct_delay] = 1.0;

  Rng rng(cfg.seed);
  const double decay = 3.0 * std::numbers::ln10 / cfg.t60;
  double energy = 0.0;
  for (int n = cfg.direct_delay + 1; n < cfg.length; ++n) {
    const double t = static_cast<double>(n - cfg.direct_delay) / cfg.sample_rate;
    const double v = rng.Gaussian() * std::exp(-decay * t);
    h.samples[n] = v;
    energy += v * v;
  }
  if (energy > 0.0) {
    const double gain = std::sqrt(std::pow(10.0, -cfg.drr_db / 10.0) / energy);
    for (int n = cfg.direct_delay + 1; n < cfg.length; ++n) h.samples[n] *= gain;
  }
  return h;
}

Waveform Convolve(const Waveform &w, const Waveform &h) {
  if (w.sample_rate != h.sample_rate)
    throw ConfigError("convolve: sample rates differ");
  Waveform out;
  out.sample_rate = w.sample_rate;
  if (w.empty() || h.empty()) return out;
  const size_t len = w.size() + h.size() - 1;
  out.samples.assign(len, 0.0);

  if (std::min(w.size(), h.size()) <= 32) {
    for (size_t i = 0; i < w.size(); ++i)
      for (size_t j = 0; j < h.size(); ++j)
        out.samples[i + j] += w.samples[i] * h.samples[j];
    return out;
  }

  int n = 1;
  while (static_cast<size_t>(n) < len) n <<= 1;
  RealFft fft(n);
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n);
  std::copy(w.samples.begin(), w.samples.end(), a.begin());
  std::copy(h.samples.begin(), h.samples.end(), b.begin());
  std::vector<Complex> fa(fft.NumBins()), fb(fft.NumBins());
  fft.Forward(a, fa);
  fft.Forward(b, fb);
  for (size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft.Inverse(fa, c);
  std::copy(c.begin(), c.begin() + len, out.samples.begin());
  return out;
}

double MeanPower(const std::vector<double> &x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

MixResult MixAtSnr(const Waveform &clean, const Waveform &noise, double snr_db,
                   Rng *rng) {
  if (!std::isfinite(snr_db)) throw ConfigError("mix: snr_db must be finite");
  if (noise.size() < clean.size())
    throw ConfigError("mix: noise (" + std::to_string(noise.size()) +
                      " samples) shorter than clean (" +
                      std::to_string(clean.size()) + " samples)");
  if (clean.sample_rate != noise.sample_rate)
    throw ConfigError("mix: sample rates differ");
  MixResult r;
  const size_t slack = noise.size() - clean.size();
  r.offset = rng ? static_cast<size_t>(rng->Below(slack + 1)) : 0;
  const double p_clean = MeanPower(clean.samples);
  if (!(p_clean > 0.0)) throw NumericError("mix: clean signal is silent");
  std::vector<double> segment(noise.samples.begin() + r.offset,
                              noise.samples.begin() + r.offset + clean.size());
  const double p_noise = MeanPower(segment);
  if (!(p_noise > 0.0)) throw NumericError("mix: noise segment is silent");
  r.alpha = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));

  r.scaled_noise.sample_rate = clean.sample_rate;
  r.scaled_noise.samples.resize(clean.size());
  r.mixture.sample_rate = clean.sample_rate;
  r.mixture.samples.resize(clean.size());
  for (size_t i = 0; i < clean.size(); ++i) {
    r.scaled_noise.samples[i] = r.alpha * segment[i];
    r.mixture.samples[i] = clean.samples[i] + r.scaled_noise.samples[i];
  }
  return r;
}

}  // namespace sfm
