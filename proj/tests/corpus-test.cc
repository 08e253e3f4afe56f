// sfmdnn/tests/corpus-test.cc

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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "oracles.h"
#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/errors.h"
#include "sfmdnn/corpus/corpus.h"
#include "sfmdnn/signal/feature-io.h"

using namespace sfm;
namespace fs = std::filesystem;

namespace {

// Least-squares slope, in dB per second, of the smoothed energy envelope of
// h after the direct path, over the first `seconds` of the tail.
double DecaySlope(const Waveform &h, int direct_delay, double seconds) {
  const int sr = h.sample_rate;
  const int win = sr / 100;
  const int start = direct_delay + 1;
  const int stop = std::min<int>(start + seconds * sr, h.samples.size()) - win;
  std::vector<double> xs, ys;
  for (int n = start; n < stop; n += win / 2) {
    double e = 0.0;
    for (int k = 0; k < win; ++k) e += h.samples[n + k] * h.samples[n + k];
    xs.push_back((n + win / 2.0 - direct_delay) / sr);
    ys.push_back(10 * std::log10(e / win));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

Waveform Wave(std::vector<double> s) {
  Waveform w;
  w.samples = std::move(s);
  return w;
}

CorpusConfig SmallCorpus() {
  CorpusConfig c;
  c.seed = 42;
  c.train_utterances = 2;
  c.dev_utterances = 1;
  c.test_utterances = 2;
  c.speech.min_duration = 1.0;
  c.speech.max_duration = 1.5;
  c.rir_seconds = 0.3;
  return c;
}

std::vector<std::string> FilesUnder(const fs::path &root) {
  std::vector<std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("synth_rir") {
  for (double t60 : {0.3, 0.5, 0.8}) {
    RirConfig cfg;
    cfg.t60 = t60;
    cfg.length = static_cast<int>(1.2 * t60 * 16000);
    cfg.seed = 3;
    const Waveform h = SynthRir(cfg);
    REQUIRE(h.samples.size() == static_cast<size_t>(cfg.length));
    for (int n = 0; n < cfg.direct_delay; ++n) CHECK(h.samples[n] == 0.0);
    CHECK(h.samples[cfg.direct_delay] == 1.0);
    const double slope = DecaySlope(h, cfg.direct_delay, 0.8 * t60);
    MESSAGE("t60 " << t60 << ": slope " << slope << " dB/s, want " << -60 / t60);
    CHECK(std::abs(slope - (-60.0 / t60)) <= 0.15 * 60.0 / t60);
    CHECK(SynthRir(cfg).samples == h.samples);
  }

  RirConfig cfg;
  cfg.drr_db = 6.0;
  const Waveform h = SynthRir(cfg);
  double tail = 0.0;
  for (size_t n = cfg.direct_delay + 1; n < h.samples.size(); ++n) tail += h.samples[n] * h.samples[n];
  CHECK(10 * std::log10(1.0 / tail) == doctest::Approx(6.0).epsilon(1e-9));

  RirConfig bad;
  bad.t60 = 0.0;
  CHECK_THROWS_AS(ValidateRirConfig(bad), ConfigError);
  bad = RirConfig{};
  bad.direct_delay = bad.length;
  CHECK_THROWS_AS(ValidateRirConfig(bad), ConfigError);
}

TEST_CASE("convolve") {
  Rng rng(4);
  std::vector<double> x(50);
  for (auto &v : x) v = rng.Gaussian();
  CHECK(Convolve(Wave(x), Wave({1.0})).samples == x);
  const auto shifted = Convolve(Wave(x), Wave({0, 0, 0, 1.0})).samples;
  REQUIRE(shifted.size() == 53);
  for (int n = 0; n < 3; ++n) CHECK(shifted[n] == 0.0);
  for (int n = 0; n < 50; ++n) CHECK(shifted[n + 3] == doctest::Approx(x[n]).epsilon(1e-12));

  for (auto [n, m] : std::vector<std::pair<int, int>>{{7, 3}, {300, 40}, {2000, 900}}) {
    std::vector<double> a(n), b(m);
    for (auto &v : a) v = rng.Gaussian();
    for (auto &v : b) v = rng.Gaussian();
    const auto got = Convolve(Wave(a), Wave(b)).samples;
    const auto want = oracle::Convolve(a, b);
    REQUIRE(got.size() == want.size());
    double worst = 0.0;
    for (size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    CHECK(worst <= 1e-10);
  }
  CHECK(Convolve(Wave({}), Wave({1.0})).samples.empty());
  Waveform other = Wave({1.0});
  other.sample_rate = 8000;
  CHECK_THROWS_AS(Convolve(Wave(x), other), ConfigError);
}

TEST_CASE("mix_at_snr") {
  Rng rng(5);
  std::vector<double> s(1000), n(1000);
  for (auto &v : s) v = rng.Gaussian();
  for (auto &v : n) v = rng.Gaussian();
  const double ps = MeanPower(s), pn = MeanPower(n);
  for (auto &v : n) v *= std::sqrt(ps / pn);
  CHECK(MixAtSnr(Wave(s), Wave(n), 0.0).alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(MixAtSnr(Wave(s), Wave(n), 20.0).alpha == doctest::Approx(0.1).epsilon(1e-12));

  std::vector<double> long_noise(5000);
  for (auto &v : long_noise) v = rng.Gaussian() * 3.0;
  for (double snr : {-6.0, -3.0, 0.0, 3.0, 6.0, 9.0, 17.5}) {
    Rng offset(static_cast<uint64_t>(snr + 100));
    const MixResult m = MixAtSnr(Wave(s), Wave(long_noise), snr, &offset);
    REQUIRE(m.mixture.samples.size() == s.size());
    CHECK(m.offset + s.size() <= long_noise.size());
    const double measured = 10 * std::log10(MeanPower(s) / MeanPower(m.scaled_noise.samples));
    CHECK(std::abs(measured - snr) <= 1e-6);
    for (size_t i = 0; i < s.size(); ++i) {
      CHECK(m.scaled_noise.samples[i] == doctest::Approx(m.alpha * long_noise[m.offset + i]));
      CHECK(m.mixture.samples[i] == doctest::Approx(s[i] + m.scaled_noise.samples[i]));
    }
  }
  CHECK_THROWS_AS(MixAtSnr(Wave(std::vector<double>(10, 0.0)), Wave(n), 0.0), NumericError);
  CHECK_THROWS_AS(MixAtSnr(Wave(s), Wave(std::vector<double>(1000, 0.0)), 0.0), NumericError);
  CHECK_THROWS_AS(MixAtSnr(Wave(s), Wave({1.0, 2.0}), 0.0), ConfigError);
}

TEST_CASE("synthetic sources") {
  SpeechLikeConfig sc;
  const Waveform a = SynthesizeSpeechLike(sc, 1), b = SynthesizeSpeechLike(sc, 1);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != SynthesizeSpeechLike(sc, 2).samples);
  const double dur = static_cast<double>(a.samples.size()) / sc.sample_rate;
  CHECK(dur >= sc.min_duration);
  CHECK(dur <= sc.max_duration + 1e-9);
  // The background floor adds a little on top of the requested level.
  CHECK(std::sqrt(MeanPower(a.samples)) == doctest::Approx(sc.rms).epsilon(0.01));

  for (NoiseType t : {NoiseType::kWhite, NoiseType::kPink}) {
    const Waveform n = SynthesizeNoise(t, 16000, 16000, 3);
    CHECK(n.samples.size() == 16000);
    CHECK(MeanPower(n.samples) > 0.0);
    CHECK(SynthesizeNoise(t, 16000, 16000, 3).samples == n.samples);
  }
  CHECK(ParseNoiseType("pink") == NoiseType::kPink);
  CHECK_THROWS_AS(ParseNoiseType("brown"), ConfigError);
}

TEST_CASE("build_corpus") {
  oracle::TempDir dir("corpus");
  const CorpusConfig cfg = SmallCorpus();
  const CorpusManifest m = BuildCorpus(cfg, dir / "a", 1);
  CHECK(m.BySplit(Split::kTrain).size() == 2);
  CHECK(m.BySplit(Split::kDev).size() == 1);
  CHECK(m.BySplit(Split::kTest).size() == 2 * cfg.snr_grid.size());

  std::set<double> test_snrs;
  std::map<Split, std::set<std::string>> cleans;
  for (const auto &r : m.recipes) {
    cleans[r.split].insert(r.clean_id);
    if (r.split == Split::kTest) test_snrs.insert(r.snr_db);
    const Waveform clean = LoadWav(m.Resolve(r.clean_path));
    const Waveform rev = LoadWav(m.Resolve(r.reverberant_path));
    const Waveform noise = LoadWav(m.Resolve(r.noise_path));
    const Waveform noisy = LoadWav(m.Resolve(r.noisy_path));
    CHECK(rev.samples.size() == clean.samples.size());
    CHECK(noisy.samples.size() == clean.samples.size());
    const RealMatrix ref = ReadFeatures(m.Resolve(r.reference_path));
    CHECK(ref.rows() == ComputeLogMel(noisy, m.features).data.rows());
    // References come from the clean signal before float32 storage.
    CHECK((ref - ComputeLogMel(clean, m.features).data).cwiseAbs().maxCoeff() <= 1e-3);
    const double snr = 10 * std::log10(MeanPower(rev.samples) / MeanPower(noise.samples));
    CHECK(std::abs(snr - r.snr_db) <= 1e-3);  // float32 storage
    // Alignment: the reverberant signal starts with the delayed direct path.
    const Waveform h = LoadWav(m.Resolve(r.rir_path));
    const auto direct = Convolve(clean, h).samples;
    for (size_t n = 0; n < 100; ++n) CHECK(rev.samples[n] == doctest::Approx(direct[n]).epsilon(1e-5));
  }
  CHECK(test_snrs == std::set<double>(cfg.snr_grid.begin(), cfg.snr_grid.end()));
  for (const auto &s : cleans[Split::kTrain]) {
    CHECK(!cleans[Split::kDev].count(s));
    CHECK(!cleans[Split::kTest].count(s));
  }

  // Same seed, different thread count: identical bytes.
  BuildCorpus(cfg, dir / "b", 3);
  const auto files = FilesUnder(dir / "a");
  CHECK(files == FilesUnder(dir / "b"));
  for (const auto &f : files)
    CHECK(ReadFileBytes(dir / ("a/" + f)) == ReadFileBytes(dir / ("b/" + f)));

  const CorpusManifest back = LoadManifest(dir / "a/manifest.json");
  CHECK(ManifestToJson(back) == ManifestToJson(m));
}

TEST_CASE("build_corpus reports every missing source") {
  oracle::TempDir dir("corpus-missing");
  CorpusConfig cfg = SmallCorpus();
  cfg.test_clean_wavs = {dir / "nope1.wav", dir / "nope2.wav"};
  cfg.noise_wavs = {dir / "nope3.wav"};
  try {
    BuildCorpus(cfg, dir / "out");
    FAIL("expected ManifestError");
  } catch (const ManifestError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("nope1.wav") != std::string::npos);
    CHECK(msg.find("nope2.wav") != std::string::npos);
    CHECK(msg.find("nope3.wav") != std::string::npos);
  }
}

TEST_CASE("manifest validation") {
  oracle::TempDir dir("manifest");
  CorpusManifest m;
  MixRecipe a;
  a.id = "a";
  a.clean_id = "c1";
  a.split = Split::kTrain;
  m.recipes = {a};
  const std::string json = ManifestToJson(m);
  CHECK(ManifestFromJson(json, dir.path().string()).recipes.size() == 1);

  CorpusManifest dup = m;
  dup.recipes.push_back(a);
  CHECK_THROWS_AS(ManifestFromJson(ManifestToJson(dup), ""), ManifestError);
  CorpusManifest shared = m;
  MixRecipe b = a;
  b.id = "b";
  b.split = Split::kTest;
  shared.recipes.push_back(b);
  CHECK_THROWS_AS(ManifestFromJson(ManifestToJson(shared), ""), ManifestError);
  CHECK_THROWS_AS(ManifestFromJson("{not json", ""), ManifestError);
  CHECK_THROWS_AS(ManifestFromJson("{\"schema_version\": 7, \"recipes\": []}", ""), ManifestError);

  KvConfig kv;
  kv.Set("train_utterances", "3");
  kv.Set("snr_grid", "0,5");
  const CorpusConfig c = CorpusConfigFromKv(kv);
  CHECK(c.train_utterances == 3);
  CHECK(c.snr_grid == std::vector<double>{0.0, 5.0});
  kv.Set("no_such_key", "1");
  CHECK_THROWS_AS(kv.CheckKnown(kCorpusConfigKeys), ConfigError);
}
