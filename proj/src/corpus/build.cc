// sfmdnn/src/corpus/build.cc

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

#include <cmath>
#include <cstdio>
#include <map>
#include <filesystem>

#include <spdlog/spdlog.h>

#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/parallel.h"
#include "sfmdnn/corpus/corpus.h"
#include "sfmdnn/signal/feature-io.h"

namespace sfm {

namespace fs = std::filesystem;

const std::vector<std::string> kCorpusConfigKeys = [] {
  std::vector<std::string> keys = {
      "seed",           "sample_rate",     "train_utterances",
      "dev_utterances", "test_utterances", "train_grid",
      "dev_grid",       "test_grid",       "snr_grid",
      "reverb",         "add_noise",       "t60",
      "rir_seconds",    "direct_delay",    "drr_db",
      "noise_type",     "min_duration",    "max_duration",
      "speech_rms",     "speech_floor_db", "train_clean_wavs",
      "dev_clean_wavs", "test_clean_wavs", "noise_wavs"};
  keys.insert(keys.end(), kFeatureConfigKeys.begin(), kFeatureConfigKeys.end());
  return keys;
}();

CorpusConfig CorpusConfigFromKv(const KvConfig &kv) {
  CorpusConfig c;
  c.seed = kv.GetUint64("seed", c.seed);
  c.sample_rate = static_cast<int>(kv.GetInt("sample_rate", c.sample_rate));
  c.train_utterances = static_cast<int>(kv.GetInt("train_utterances", c.train_utterances));
  c.dev_utterances = static_cast<int>(kv.GetInt("dev_utterances", c.dev_utterances));
  c.test_utterances = static_cast<int>(kv.GetInt("test_utterances", c.test_utterances));
  c.train_grid = kv.GetString("train_grid", c.train_grid);
  c.dev_grid = kv.GetString("dev_grid", c.dev_grid);
  c.test_grid = kv.GetString("test_grid", c.test_grid);
  c.snr_grid = kv.GetDoubleList("snr_grid", c.snr_grid);
  c.reverb = kv.GetBool("reverb", c.reverb);
  c.add_noise = kv.GetBool("add_noise", c.add_noise);
  c.t60 = kv.GetDouble("t60", c.t60);
  c.rir_seconds = kv.GetDouble("rir_seconds", c.rir_seconds);
  c.direct_delay = static_cast<int>(kv.GetInt("direct_delay", c.direct_delay));
  c.drr_db = kv.GetDouble("drr_db", c.drr_db);
  c.noise_type = ParseNoiseType(kv.GetString("noise_type", "pink"));
  c.speech.min_duration = kv.GetDouble("min_duration", c.speech.min_duration);
  c.speech.max_duration = kv.GetDouble("max_duration", c.speech.max_duration);
  c.speech.rms = kv.GetDouble("speech_rms", c.speech.rms);
  c.speech.floor_db = kv.GetDouble("speech_floor_db", c.speech.floor_db);
  c.speech.sample_rate = c.sample_rate;
  c.train_clean_wavs = kv.GetStringList("train_clean_wavs");
  c.dev_clean_wavs = kv.GetStringList("dev_clean_wavs");
  c.test_clean_wavs = kv.GetStringList("test_clean_wavs");
  c.noise_wavs = kv.GetStringList("noise_wavs");
  c.features = FeatureConfigFromKv(kv, c.sample_rate);
  ValidateCorpusConfig(c);
  return c;
}

void ValidateCorpusConfig(const CorpusConfig &c) {
  if (c.sample_rate <= 0) throw ConfigError("corpus: sample_rate must be > 0");
  if (c.train_utterances < 0 || c.dev_utterances < 0 || c.test_utterances < 0)
    throw ConfigError("corpus: utterance counts must be >= 0");
  for (const auto *g : {&c.train_grid, &c.dev_grid, &c.test_grid})
    if (*g != "full" && *g != "cycle")
      throw ConfigError("corpus: grid mode must be 'full' or 'cycle', got '" +
                        *g + "'");
  if (c.add_noise && c.snr_grid.empty())
    throw ConfigError("corpus: snr_grid is empty but add_noise is on");
  for (double s : c.snr_grid)
    if (!std::isfinite(s)) throw ConfigError("corpus: snr_grid values must be finite");
  if (c.reverb) {
    if (!(c.t60 > 0.0)) throw ConfigError("corpus: t60 must be > 0");
    if (!(c.rir_seconds > 0.0)) throw ConfigError("corpus: rir_seconds must be > 0");
    if (c.direct_delay < 0) throw ConfigError("corpus: direct_delay must be >= 0");
    if (std::lround(c.rir_seconds * c.sample_rate) <= c.direct_delay)
      throw ConfigError("corpus: rir_seconds too short for direct_delay");
  }
  ValidateFeatureConfig(c.features);
}

namespace {

struct CleanItem {
  std::string id;
  Split split;
  std::string source;  // empty for synthetic
  int index = 0;
};

std::string SnrTag(double snr) {
  std::string s = FormatDouble(snr);
  return (snr >= 0 ? "+" : "") + s;
}

const std::vector<std::string> &SourcesFor(const CorpusConfig &c, Split s) {
  switch (s) {
    case Split::kTrain:
      return c.train_clean_wavs;
    case Split::kDev:
      return c.dev_clean_wavs;
    default:
      return c.test_clean_wavs;
  }
}

int CountFor(const CorpusConfig &c, Split s) {
  switch (s) {
    case Split::kTrain:
      return c.train_utterances;
    case Split::kDev:
      return c.dev_utterances;
    default:
      return c.test_utterances;
  }
}

const std::string &GridFor(const CorpusConfig &c, Split s) {
  switch (s) {
    case Split::kTrain:
      return c.train_grid;
    case Split::kDev:
      return c.dev_grid;
    default:
      return c.test_grid;
  }
}

std::string Pad4(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", i);
  return buf;
}

void EnsureDir(const fs::path &p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create directory '" + p.string() + "': " + ec.message());
}

}  // namespace

CorpusManifest BuildCorpus(const CorpusConfig &cfg, const std::string &out_dir,
                           int jobs) {
  ValidateCorpusConfig(cfg);
  const fs::path root(out_dir);

  // Clean items per split; user-provided WAVs take precedence over the
  // synthetic generator for that split.
  std::vector<CleanItem> items;
  std::vector<std::string> failures;
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest}) {
    const auto &sources = SourcesFor(cfg, s);
    if (!sources.empty()) {
      for (size_t i = 0; i < sources.size(); ++i) {
        if (!fs::is_regular_file(sources[i]))
          failures.push_back("missing clean source: " + sources[i]);
        items.push_back({std::string(SplitName(s)) + "_" +
                             fs::path(sources[i]).stem().string(),
                         s, sources[i], static_cast<int>(i)});
      }
    } else {
      for (int i = 0; i < CountFor(cfg, s); ++i) {
        items.push_back({std::string(SplitName(s)) + "_" + Pad4(i), s, "", i});
      }
    }
  }
  for (const auto &n : cfg.noise_wavs)
    if (!fs::is_regular_file(n)) failures.push_back("missing noise source: " + n);
  if (!failures.empty()) {
    std::string msg = "corpus: " + std::to_string(failures.size()) +
                      " source problem(s):";
    for (const auto &f : failures) msg += "\n  " + f;
    throw ManifestError(msg);
  }

  for (const char *d : {"clean", "rir", "reverberant", "noise", "noisy", "ref"})
    EnsureDir(root / d);

  CorpusManifest manifest;
  manifest.seed = cfg.seed;
  manifest.sample_rate = cfg.sample_rate;
  manifest.features = cfg.features;
  manifest.base_dir = out_dir;

  // Recipes, in deterministic order.
  for (const auto &item : items) {
    MixRecipe base;
    base.split = item.split;
    base.clean_id = item.id;
    if (cfg.reverb) base.rir_id = item.id;
    base.t60 = cfg.reverb ? cfg.t60 : 0.0;
    base.clean_path = "clean/" + item.id + ".wav";
    base.rir_path = cfg.reverb ? "rir/" + item.id + ".wav" : "";
    base.reverberant_path = "reverberant/" + item.id + ".wav";
    base.reference_path = "ref/" + item.id + ".sfmf";
    std::vector<double> snrs;
    if (cfg.add_noise) {
      if (GridFor(cfg, item.split) == "full")
        snrs = cfg.snr_grid;
      else
        snrs = {cfg.snr_grid[item.index % cfg.snr_grid.size()]};
    }
    if (snrs.empty()) {
      MixRecipe r = base;
      r.id = item.id;
      r.has_noise = false;
      r.noisy_path = r.reverberant_path;
      manifest.recipes.push_back(std::move(r));
    }
    for (double snr : snrs) {
      MixRecipe r = base;
      r.id = item.id + "_snr" + SnrTag(snr);
      r.has_noise = true;
      r.snr_db = snr;
      r.noise_path = "noise/" + r.id + ".wav";
      r.noisy_path = "noisy/" + r.id + ".wav";
      manifest.recipes.push_back(std::move(r));
    }
  }

  // Stage 1: clean, RIR, reverberant and reference per clean item.
  const WavWriteOptions f32{WavEncoding::kFloat32};
  std::vector<Waveform> reverberant(items.size());
  std::vector<std::string> errors(items.size());
  ParallelFor(items.size(), jobs, [&](size_t i) {
    const auto &item = items[i];
    try {
      Waveform clean;
      if (item.source.empty()) {
        clean = SynthesizeSpeechLike(cfg.speech,
                                     DeriveSeed(cfg.seed, "corpus/clean/" + item.id));
      } else {
        clean = LoadWav(item.source);
        if (clean.sample_rate != cfg.sample_rate)
          throw ConfigError("sample rate " + std::to_string(clean.sample_rate) +
                            " differs from corpus rate");
      }
      Waveform rev = clean;
      if (cfg.reverb) {
        RirConfig rc;
        rc.t60 = cfg.t60;
        rc.length = static_cast<int>(std::lround(cfg.rir_seconds * cfg.sample_rate));
        rc.direct_delay = cfg.direct_delay;
        rc.drr_db = cfg.drr_db;
        rc.sample_rate = cfg.sample_rate;
        rc.seed = DeriveSeed(cfg.seed, "corpus/rir/" + item.id);
        const Waveform rir = SynthRir(rc);
        rev = Convolve(clean, rir);
        rev.samples.resize(clean.size());
        SaveWav(rir, (root / "rir" / (item.id + ".wav")).string(), f32);
      }
      SaveWav(clean, (root / "clean" / (item.id + ".wav")).string(), f32);
      SaveWav(rev, (root / "reverberant" / (item.id + ".wav")).string(), f32);
      WriteFeatures(ComputeLogMel(clean, cfg.features).data,
                    (root / "ref" / (item.id + ".sfmf")).string());
      reverberant[i] = std::move(rev);
    } catch (const std::exception &e) {
      errors[i] = item.id + ": " + e.what();
    }
  });

  std::map<std::string, size_t> item_index;
  for (size_t i = 0; i < items.size(); ++i) item_index[items[i].id] = i;

  // Stage 2: noise and mixtures per recipe.
  std::vector<Waveform> noise_sources;
  for (const auto &n : cfg.noise_wavs) noise_sources.push_back(LoadWav(n));
  std::vector<std::string> recipe_errors(manifest.recipes.size());
  ParallelFor(manifest.recipes.size(), jobs, [&](size_t k) {
    auto &r = manifest.recipes[k];
    if (!r.has_noise) return;
    const size_t i = item_index.at(r.clean_id);
    if (!errors[i].empty()) return;
    try {
      const Waveform &rev = reverberant[i];
      Waveform noise;
      if (noise_sources.empty()) {
        noise = SynthesizeNoise(cfg.noise_type, rev.size() + cfg.sample_rate,
                                cfg.sample_rate,
                                DeriveSeed(cfg.seed, "corpus/noise/" + r.id));
        r.noise_id = r.id;
      } else {
        const size_t which = k % noise_sources.size();
        noise = noise_sources[which];
        r.noise_id = fs::path(cfg.noise_wavs[which]).stem().string();
      }
      Rng offset_rng(DeriveSeed(cfg.seed, "corpus/offset/" + r.id));
      MixResult mix = MixAtSnr(rev, noise, r.snr_db, &offset_rng);
      SaveWav(mix.scaled_noise, (root / r.noise_path).string(), f32);
      SaveWav(mix.mixture, (root / r.noisy_path).string(), f32);
    } catch (const std::exception &e) {
      recipe_errors[k] = r.id + ": " + e.what();
    }
  });

  failures.clear();
  for (const auto &e : errors)
    if (!e.empty()) failures.push_back(e);
  for (const auto &e : recipe_errors)
    if (!e.empty()) failures.push_back(e);
  if (!failures.empty()) {
    std::string msg = "corpus: " + std::to_string(failures.size()) +
                      " recipe(s) failed:";
    for (const auto &f : failures) msg += "\n  " + f;
    throw ManifestError(msg);
  }

  SaveManifest(manifest, (root / "manifest.json").string());
  spdlog::info("corpus: {} clean utterances, {} recipes in {}", items.size(),
               manifest.recipes.size(), out_dir);
  return manifest;
}

}  // namespace sfm
