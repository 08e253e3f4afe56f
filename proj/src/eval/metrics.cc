// sfmdnn/src/eval/metrics.cc

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

#include "sfmdnn/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/kv-config.h"
#include "sfmdnn/base/parallel.h"
#include "sfmdnn/signal/feature-io.h"
#include "sfmdnn/signal/stft.h"
#include "sfmdnn/signal/wave-io.h"

namespace sfm {

namespace fs = std::filesystem;

namespace {

void CheckSameShape(const RealMatrix &a, const RealMatrix &b, const char *what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(what) + ": shapes " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + " and " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

double MelMse(const RealMatrix &enhanced, const RealMatrix &reference) {
  CheckSameShape(enhanced, reference, "mel_mse");
  if (enhanced.size() == 0) throw ShapeError("mel_mse: empty features");
  return (enhanced - reference).squaredNorm() / static_cast<double>(enhanced.size());
}

double LogSpectralDistortion(const RealMatrix &a, const RealMatrix &b) {
  CheckSameShape(a, b, "log_spectral_distortion");
  if (a.size() == 0) throw ShapeError("log_spectral_distortion: empty spectra");
  const double to_db = 20.0 / std::log(10.0);
  double total = 0.0;
  for (Eigen::Index t = 0; t < a.rows(); ++t) {
    const double ms = (a.row(t) - b.row(t)).squaredNorm() / static_cast<double>(a.cols());
    total += to_db * std::sqrt(ms);
  }
  return total / static_cast<double>(a.rows());
}

double SegmentalSnr(const std::vector<double> &test,
                    const std::vector<double> &clean, const SegSnrConfig &cfg) {
  if (test.size() != clean.size())
    throw ShapeError("segmental_snr: lengths " + std::to_string(test.size()) +
                     " and " + std::to_string(clean.size()));
  if (cfg.segment < 1 || !(cfg.min_db < cfg.max_db))
    throw ConfigError("segmental_snr: bad segment length or clamp range");
  const size_t seg = static_cast<size_t>(cfg.segment);
  const size_t n_seg = clean.size() / seg;
  if (n_seg == 0) throw ShapeError("segmental_snr: signal shorter than one segment");
  double total = 0.0;
  for (size_t s = 0; s < n_seg; ++s) {
    double sig = 0.0, err = 0.0;
    for (size_t i = s * seg; i < (s + 1) * seg; ++i) {
      sig += clean[i] * clean[i];
      const double d = clean[i] - test[i];
      err += d * d;
    }
    double db;
    if (err == 0.0)
      db = cfg.max_db;
    else if (sig == 0.0)
      db = cfg.min_db;
    else
      db = std::clamp(10.0 * std::log10(sig / err), cfg.min_db, cfg.max_db);
    total += db;
  }
  return total / static_cast<double>(n_seg);
}

double SegmentalSnrGain(const std::vector<double> &enhanced,
                        const std::vector<double> &degraded,
                        const std::vector<double> &clean,
                        const SegSnrConfig &cfg) {
  if (enhanced.size() != clean.size() || degraded.size() != clean.size())
    throw ShapeError("segmental_snr_gain: enhanced, degraded and clean lengths differ (" +
                     std::to_string(enhanced.size()) + ", " +
                     std::to_string(degraded.size()) + ", " +
                     std::to_string(clean.size()) + ")");
  return SegmentalSnr(enhanced, clean, cfg) - SegmentalSnr(degraded, clean, cfg);
}

SystemMetrics EvaluateSystem(const CorpusManifest &manifest,
                             const std::optional<Split> &split,
                             const std::string &system_dir,
                             const std::string &name, int jobs) {
  const fs::path root(system_dir);
  const fs::path cfg_path = root / "pipeline.txt";
  if (!fs::exists(cfg_path))
    throw IoError("'" + system_dir + "' is not an enhancement output (no pipeline.txt)");
  const std::string mode = KvConfig::FromFile(cfg_path.string()).GetString("mode", "");
  const bool noisy_is_output = mode == "baseline";

  std::vector<const MixRecipe *> recipes;
  for (const auto &r : manifest.recipes)
    if (!split || r.split == *split) recipes.push_back(&r);

  SystemMetrics out;
  out.system = name;
  out.utterances.resize(recipes.size());
  const double floor = manifest.features.log_floor;
  const int seg = std::max(1, manifest.sample_rate / 100);
  ParallelFor(recipes.size(), jobs, [&](size_t i) {
    const MixRecipe &r = *recipes[i];
    UtteranceMetrics &m = out.utterances[i];
    m.id = r.id;
    m.has_noise = r.has_noise;
    m.snr_db = r.snr_db;
    const fs::path feat = root / "features" / (r.id + ".sfmf");
    if (!fs::exists(feat))
      throw IoError(name + ": no features for '" + r.id + "' (enhancement failed?)");
    m.mel_mse = MelMse(ReadFeatures(feat.string()),
                       ReadFeatures(manifest.Resolve(r.reference_path)));

    const fs::path wav = root / "waveforms" / (r.id + ".wav");
    if (!noisy_is_output && !fs::exists(wav)) return;
    const Waveform clean = LoadWav(manifest.Resolve(r.clean_path));
    const Waveform noisy = LoadWav(manifest.Resolve(r.noisy_path));
    const Waveform enhanced = noisy_is_output ? noisy : LoadWav(wav.string());
    const StftConfig &stft = manifest.features.stft;
    m.lsd = LogSpectralDistortion(LogMagnitude(Stft(enhanced, stft), floor).data,
                                  LogMagnitude(Stft(clean, stft), floor).data);
    SegSnrConfig sc;
    sc.segment = seg;
    m.segsnr_gain = SegmentalSnrGain(enhanced.samples, noisy.samples, clean.samples, sc);
  });
  return out;
}

namespace {

nlohmann::json OptionalNumber(const std::optional<double> &v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> ReadOptional(const nlohmann::json &j, const char *key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

std::string SystemMetricsToJson(const SystemMetrics &m) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["system"] = m.system;
  nlohmann::json utts = nlohmann::json::array();
  for (const auto &u : m.utterances) {
    nlohmann::json e;
    e["id"] = u.id;
    e["has_noise"] = u.has_noise;
    e["snr_db"] = u.snr_db;
    e["mel_mse"] = u.mel_mse;
    e["lsd_db"] = OptionalNumber(u.lsd);
    e["segsnr_gain_db"] = OptionalNumber(u.segsnr_gain);
    utts.push_back(std::move(e));
  }
  j["utterances"] = std::move(utts);
  return j.dump(2) + "\n";
}

SystemMetrics SystemMetricsFromJson(const std::string &json) {
  SystemMetrics m;
  try {
    const auto j = nlohmann::json::parse(json);
    if (j.at("schema_version").get<int>() != 1)
      throw FormatError("metrics: unsupported schema_version");
    m.system = j.at("system").get<std::string>();
    for (const auto &e : j.at("utterances")) {
      UtteranceMetrics u;
      u.id = e.at("id").get<std::string>();
      u.has_noise = e.at("has_noise").get<bool>();
      u.snr_db = e.at("snr_db").get<double>();
      u.mel_mse = e.at("mel_mse").get<double>();
      u.lsd = ReadOptional(e, "lsd_db");
      u.segsnr_gain = ReadOptional(e, "segsnr_gain_db");
      m.utterances.push_back(std::move(u));
    }
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("metrics: ") + e.what());
  }
  return m;
}

void SaveSystemMetrics(const SystemMetrics &m, const std::string &path) {
  const std::string text = SystemMetricsToJson(m);
  WriteFileBytes(path, std::vector<unsigned char>(text.begin(), text.end()));
}

SystemMetrics LoadSystemMetrics(const std::string &path) {
  const auto bytes = ReadFileBytes(path);
  return SystemMetricsFromJson(std::string(bytes.begin(), bytes.end()));
}

}  // namespace sfm
