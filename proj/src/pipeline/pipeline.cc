// sfmdnn/src/pipeline/pipeline.cc

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

#include "sfmdnn/pipeline/pipeline.h"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/parallel.h"
#include "sfmdnn/signal/feature-io.h"

namespace sfm {

namespace fs = std::filesystem;

const char *PipelineModeName(PipelineMode m) {
  switch (m) {
    case PipelineMode::kBaseline:
      return "baseline";
    case PipelineMode::kWpeOnly:
      return "wpe_only";
    case PipelineMode::kDnnOnly:
      return "dnn_only";
    case PipelineMode::kWpeDnn:
      return "wpe_dnn";
  }
  return "unknown";
}

PipelineMode ParsePipelineMode(const std::string &name) {
  if (name == "baseline") return PipelineMode::kBaseline;
  if (name == "wpe_only") return PipelineMode::kWpeOnly;
  if (name == "dnn_only") return PipelineMode::kDnnOnly;
  if (name == "wpe_dnn") return PipelineMode::kWpeDnn;
  throw ConfigError("unknown mode '" + name +
                    "' (expected baseline, wpe_only, dnn_only or wpe_dnn)");
}

bool UsesWpe(PipelineMode m) {
  return m == PipelineMode::kWpeOnly || m == PipelineMode::kWpeDnn;
}

bool UsesDnn(PipelineMode m) {
  return m == PipelineMode::kDnnOnly || m == PipelineMode::kWpeDnn;
}

void ValidatePipelineConfig(const PipelineConfig &cfg) {
  ValidateFeatureConfig(cfg.features);
  if (UsesWpe(cfg.mode)) {
    ValidateWpeConfig(cfg.wpe);
    CheckOverlapAddInvertible(cfg.features.stft);
  }
  if (!UsesDnn(cfg.mode)) return;
  if (!cfg.model)
    throw ConfigError(std::string("mode ") + PipelineModeName(cfg.mode) +
                      " requires a model checkpoint");
  const MlpModel &m = *cfg.model;
  const int bins = cfg.features.stft.NumBins();
  if (m.net.InputDim() != (2 * m.context + 1) * bins)
    throw ShapeError("model input dimension " + std::to_string(m.net.InputDim()) +
                     " does not match context " + std::to_string(m.context) +
                     " x " + std::to_string(bins) + " bins");
  if (m.net.OutputDim() != cfg.features.mel.n_mels)
    throw ShapeError("model output dimension " + std::to_string(m.net.OutputDim()) +
                     " does not match n_mels " +
                     std::to_string(cfg.features.mel.n_mels));
}

Waveform ResynthesizeWpe(const ComplexSpectrogram &enhanced, int sample_rate,
                         size_t length) {
  Waveform x = Istft(enhanced, sample_rate);
  x.samples.resize(length, 0.0);
  return x;
}

LogSpectrogram NetworkInput(const Waveform &w, const FeatureConfig &features,
                            const WpeConfig *wpe, bool resynthesize,
                            int wpe_threads) {
  ComplexSpectrogram spec = Stft(w, features.stft);
  if (wpe) {
    spec = WpeDereverberate(spec, *wpe, wpe_threads).enhanced;
    if (resynthesize)
      spec = Stft(ResynthesizeWpe(spec, w.sample_rate, w.size()), features.stft);
  }
  return LogMagnitude(spec, features.log_floor);
}

EnhanceResult EnhanceUtterance(const Waveform &w, const PipelineConfig &cfg) {
  ValidatePipelineConfig(cfg);
  const FeatureConfig &f = cfg.features;
  EnhanceResult out;
  const ComplexSpectrogram observed = Stft(w, f.stft);
  switch (cfg.mode) {
    case PipelineMode::kBaseline:
      out.features = LogMel(observed, MelMatrix(f.mel), f.log_floor, f.mel.use_power);
      break;
    case PipelineMode::kDnnOnly:
      out.features =
          MapFeatures(*cfg.model, LogMagnitude(observed, f.log_floor)).denormalized;
      break;
    case PipelineMode::kWpeOnly:
    case PipelineMode::kWpeDnn: {
      const auto wpe = WpeDereverberate(observed, cfg.wpe, cfg.wpe_threads);
      out.enhanced = ResynthesizeWpe(wpe.enhanced, w.sample_rate, w.size());
      if (cfg.mode == PipelineMode::kWpeOnly) {
        out.features = ComputeLogMel(*out.enhanced, f);
      } else {
        const ComplexSpectrogram dnn_in =
            cfg.resynthesize ? Stft(*out.enhanced, f.stft) : wpe.enhanced;
        out.features =
            MapFeatures(*cfg.model, LogMagnitude(dnn_in, f.log_floor)).denormalized;
      }
      break;
    }
  }
  return out;
}

std::string PipelineConfigText(const PipelineConfig &cfg) {
  KvConfig kv;
  kv.Set("mode", PipelineModeName(cfg.mode));
  FeatureConfigToKv(cfg.features, &kv);
  if (UsesWpe(cfg.mode)) {
    kv.Set("wpe_taps", std::to_string(cfg.wpe.taps));
    kv.Set("wpe_delay", std::to_string(cfg.wpe.delay));
    kv.Set("wpe_iterations", std::to_string(cfg.wpe.iterations));
    kv.Set("wpe_variance_floor", FormatDouble(cfg.wpe.variance_floor));
    kv.Set("wpe_regularization", FormatDouble(cfg.wpe.regularization));
    kv.Set("wpe_relative_regularization", cfg.wpe.relative_regularization ? "1" : "0");
  }
  if (UsesDnn(cfg.mode) && cfg.model) {
    const auto bytes = SerializeModel(*cfg.model);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(Fnv1a64(std::string_view(
                      reinterpret_cast<const char *>(bytes.data()), bytes.size()))));
    kv.Set("model_hash", buf);
    kv.Set("resynthesize", cfg.resynthesize ? "1" : "0");
  }
  return kv.ToText();
}

BatchSummary BatchEnhance(const CorpusManifest &manifest,
                          const std::optional<Split> &split,
                          const PipelineConfig &cfg, const std::string &out_dir,
                          int jobs) {
  ValidatePipelineConfig(cfg);
  std::vector<const MixRecipe *> recipes;
  for (const auto &r : manifest.recipes)
    if (!split || r.split == *split) recipes.push_back(&r);

  const fs::path root(out_dir);
  fs::create_directories(root / "features");
  if (UsesWpe(cfg.mode)) fs::create_directories(root / "waveforms");

  BatchSummary summary;
  const std::string config_text = PipelineConfigText(cfg);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(config_text)));
  summary.config_hash = hash;
  {
    std::ofstream cfg_out(root / "pipeline.txt", std::ios::trunc);
    if (!cfg_out) throw IoError("cannot write '" + (root / "pipeline.txt").string() + "'");
    cfg_out << config_text;
  }

  std::vector<nlohmann::json> log(recipes.size());
  ParallelFor(recipes.size(), jobs, [&](size_t i) {
    const MixRecipe &r = *recipes[i];
    nlohmann::json entry;
    entry["id"] = r.id;
    entry["config_hash"] = summary.config_hash;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Waveform w = LoadWav(manifest.Resolve(r.noisy_path));
      EnhanceResult res = EnhanceUtterance(w, cfg);
      WriteFeatures(res.features.data, (root / "features" / (r.id + ".sfmf")).string());
      if (res.enhanced)
        SaveWav(*res.enhanced, (root / "waveforms" / (r.id + ".wav")).string(),
                {WavEncoding::kFloat32});
      entry["status"] = "ok";
      entry["frames"] = res.features.data.rows();
    } catch (const std::exception &e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
      spdlog::error("enhance {}: {}", r.id, e.what());
    }
    entry["seconds"] = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0).count();
    log[i] = std::move(entry);
  });

  std::ofstream out(root / "run.jsonl", std::ios::trunc);
  if (!out) throw IoError("cannot write run log in '" + out_dir + "'");
  for (const auto &entry : log) {
    out << entry.dump() << "\n";
    if (entry["status"] == "ok")
      ++summary.succeeded;
    else
      ++summary.failed;
  }
  return summary;
}

}  // namespace sfm
