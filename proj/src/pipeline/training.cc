// sfmdnn/src/pipeline/training.cc

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

#include "sfmdnn/pipeline/training.h"

#include <cmath>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/parallel.h"
#include "sfmdnn/dnn/context.h"
#include "sfmdnn/pipeline/pipeline.h"
#include "sfmdnn/signal/feature-io.h"

namespace sfm {

const char *TrainRecipeName(TrainRecipe r) {
  return r == TrainRecipe::kOriginal ? "original" : "enhanced";
}

TrainRecipe ParseTrainRecipe(const std::string &name) {
  if (name == "original") return TrainRecipe::kOriginal;
  if (name == "enhanced") return TrainRecipe::kEnhanced;
  throw ConfigError("unknown recipe '" + name + "' (expected original or enhanced)");
}

const std::vector<std::string> kTrainConfigKeys = {
    "recipe",          "hidden_units",         "context",
    "batch_size",      "learning_rate",        "max_epochs",
    "dropout_rate",    "adagrad_epsilon",      "early_stop",
    "increase_threshold", "improvement_threshold", "input_norm",
    "reference_norm",  "output_activation",    "norm_epsilon",
    "wpe_input",       "wpe_taps",             "wpe_delay",
    "wpe_iterations",  "wpe_variance_floor",   "wpe_regularization",
    "resynthesize"};

SfmTrainOptions RecipeDefaults(TrainRecipe recipe, uint64_t seed) {
  SfmTrainOptions o;
  o.recipe = recipe;
  o.seed = seed;
  o.train.batch_size = 256;
  o.train.learning_rate = 0.01;
  o.train.max_epochs = 50;
  o.train.adagrad_epsilon = 1e-8;
  if (recipe == TrainRecipe::kOriginal) {
    o.input_norm = InputNorm::kGlobalMvn;
    o.reference_norm = ReferenceNorm::kGlobalMinMax01;
    o.output_activation = OutputActivation::kSigmoid;
    o.train.dropout_rate = 0.0;
    o.train.early_stop.enabled = false;
  } else {
    o.input_norm = InputNorm::kUtteranceMvn;
    o.reference_norm = ReferenceNorm::kUtteranceMvn;
    o.output_activation = OutputActivation::kLinear;
    o.train.dropout_rate = 0.2;
    o.train.early_stop.enabled = true;
    // Matched training is the default for the enhanced cascade system.
  }
  return o;
}

namespace {

InputNorm ParseInputNorm(const std::string &s) {
  if (s == "global_mvn") return InputNorm::kGlobalMvn;
  if (s == "utterance_mvn") return InputNorm::kUtteranceMvn;
  throw ConfigError("unknown input_norm '" + s + "'");
}

ReferenceNorm ParseReferenceNorm(const std::string &s) {
  if (s == "global_minmax_01") return ReferenceNorm::kGlobalMinMax01;
  if (s == "utterance_mvn") return ReferenceNorm::kUtteranceMvn;
  throw ConfigError("unknown reference_norm '" + s + "'");
}

}  // namespace

SfmTrainOptions TrainOptionsFromKv(const KvConfig &kv, uint64_t seed) {
  SfmTrainOptions o =
      RecipeDefaults(ParseTrainRecipe(kv.GetString("recipe", "original")), seed);
  if (kv.Has("hidden_units")) {
    o.hidden_units.clear();
    for (double d : kv.GetDoubleList("hidden_units", {}))
      o.hidden_units.push_back(static_cast<int>(d));
    if (o.hidden_units.empty()) throw ConfigError("hidden_units must not be empty");
  }
  o.context = static_cast<int>(kv.GetInt("context", o.context));
  o.train.batch_size = static_cast<int>(kv.GetInt("batch_size", o.train.batch_size));
  o.train.learning_rate = kv.GetDouble("learning_rate", o.train.learning_rate);
  o.train.max_epochs = static_cast<int>(kv.GetInt("max_epochs", o.train.max_epochs));
  o.train.dropout_rate = kv.GetDouble("dropout_rate", o.train.dropout_rate);
  o.train.adagrad_epsilon = kv.GetDouble("adagrad_epsilon", o.train.adagrad_epsilon);
  o.train.early_stop.enabled = kv.GetBool("early_stop", o.train.early_stop.enabled);
  o.train.early_stop.increase_threshold =
      kv.GetDouble("increase_threshold", o.train.early_stop.increase_threshold);
  o.train.early_stop.improvement_threshold =
      kv.GetDouble("improvement_threshold", o.train.early_stop.improvement_threshold);
  if (kv.Has("input_norm")) o.input_norm = ParseInputNorm(kv.GetString("input_norm", ""));
  if (kv.Has("reference_norm"))
    o.reference_norm = ParseReferenceNorm(kv.GetString("reference_norm", ""));
  if (kv.Has("output_activation"))
    o.output_activation = ParseOutputActivation(kv.GetString("output_activation", ""));
  o.norm_epsilon = kv.GetDouble("norm_epsilon", o.norm_epsilon);
  o.wpe_input = kv.GetBool("wpe_input", o.wpe_input);
  o.wpe.taps = static_cast<int>(kv.GetInt("wpe_taps", o.wpe.taps));
  o.wpe.delay = static_cast<int>(kv.GetInt("wpe_delay", o.wpe.delay));
  o.wpe.iterations = static_cast<int>(kv.GetInt("wpe_iterations", o.wpe.iterations));
  o.wpe.variance_floor = kv.GetDouble("wpe_variance_floor", o.wpe.variance_floor);
  o.wpe.regularization = kv.GetDouble("wpe_regularization", o.wpe.regularization);
  o.resynthesize = kv.GetBool("resynthesize", o.resynthesize);
  o.train.shuffle_seed = DeriveSeed(seed, "shuffle");
  o.train.dropout_seed = DeriveSeed(seed, "dropout");
  if (o.context < 0) throw ConfigError("context must be >= 0");
  for (int h : o.hidden_units)
    if (h < 1) throw ConfigError("hidden_units must be positive");
  ValidateTrainConfig(o.train);
  if (o.wpe_input) ValidateWpeConfig(o.wpe);
  if (o.output_activation == OutputActivation::kSigmoid &&
      o.reference_norm == ReferenceNorm::kUtteranceMvn)
    spdlog::warn("sigmoid output cannot reach utterance-MVN targets outside (0,1)");
  return o;
}

std::string TrainOptionsText(const SfmTrainOptions &o) {
  KvConfig kv;
  kv.Set("recipe", TrainRecipeName(o.recipe));
  std::string hidden;
  for (size_t i = 0; i < o.hidden_units.size(); ++i)
    hidden += (i ? "," : "") + std::to_string(o.hidden_units[i]);
  kv.Set("hidden_units", hidden);
  kv.Set("context", std::to_string(o.context));
  kv.Set("batch_size", std::to_string(o.train.batch_size));
  kv.Set("learning_rate", FormatDouble(o.train.learning_rate));
  kv.Set("max_epochs", std::to_string(o.train.max_epochs));
  kv.Set("dropout_rate", FormatDouble(o.train.dropout_rate));
  kv.Set("adagrad_epsilon", FormatDouble(o.train.adagrad_epsilon));
  kv.Set("early_stop", o.train.early_stop.enabled ? "1" : "0");
  kv.Set("increase_threshold", FormatDouble(o.train.early_stop.increase_threshold));
  kv.Set("improvement_threshold",
         FormatDouble(o.train.early_stop.improvement_threshold));
  kv.Set("input_norm", InputNormName(o.input_norm));
  kv.Set("reference_norm", ReferenceNormName(o.reference_norm));
  kv.Set("output_activation", OutputActivationName(o.output_activation));
  kv.Set("norm_epsilon", FormatDouble(o.norm_epsilon));
  kv.Set("wpe_input", o.wpe_input ? "1" : "0");
  if (o.wpe_input) {
    kv.Set("wpe_taps", std::to_string(o.wpe.taps));
    kv.Set("wpe_delay", std::to_string(o.wpe.delay));
    kv.Set("wpe_iterations", std::to_string(o.wpe.iterations));
    kv.Set("wpe_variance_floor", FormatDouble(o.wpe.variance_floor));
    kv.Set("wpe_regularization", FormatDouble(o.wpe.regularization));
    kv.Set("resynthesize", o.resynthesize ? "1" : "0");
  }
  kv.Set("seed", std::to_string(o.seed));
  return kv.ToText();
}

std::string TrainHistoryToJson(const TrainHistory &h) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["train_cost"] = h.train_cost;
  nlohmann::json dev = nlohmann::json::array();
  for (double d : h.dev_cost)
    dev.push_back(std::isfinite(d) ? nlohmann::json(d) : nlohmann::json(nullptr));
  j["dev_cost"] = std::move(dev);
  j["stop_reason"] = StopReasonName(h.stop_reason);
  j["best_epoch"] = h.best_epoch;
  return j.dump(2) + "\n";
}

TrainHistory TrainHistoryFromJson(const std::string &json) {
  TrainHistory h;
  try {
    const auto j = nlohmann::json::parse(json);
    h.train_cost = j.at("train_cost").get<std::vector<double>>();
    for (const auto &d : j.at("dev_cost"))
      h.dev_cost.push_back(d.is_null() ? NAN : d.get<double>());
    const std::string reason = j.at("stop_reason").get<std::string>();
    bool known = false;
    for (StopReason r : {StopReason::kMaxEpochs, StopReason::kDevIncrease,
                         StopReason::kDevPlateau})
      if (reason == StopReasonName(r)) {
        h.stop_reason = r;
        known = true;
      }
    if (!known) throw FormatError("history: unknown stop_reason '" + reason + "'");
    h.best_epoch = j.at("best_epoch").get<int>();
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("history: ") + e.what());
  }
  return h;
}

SplitData LoadSplit(const CorpusManifest &manifest, Split split,
                    const SfmTrainOptions &opts) {
  const auto recipes = manifest.BySplit(split);
  SplitData data;
  data.ids.resize(recipes.size());
  data.inputs.resize(recipes.size());
  data.references.resize(recipes.size());
  ParallelFor(recipes.size(), opts.jobs, [&](size_t i) {
    const MixRecipe &r = *recipes[i];
    const Waveform w = LoadWav(manifest.Resolve(r.noisy_path));
    data.ids[i] = r.id;
    data.inputs[i] = NetworkInput(w, manifest.features,
                                  opts.wpe_input ? &opts.wpe : nullptr,
                                  opts.resynthesize);
    data.references[i] = ReadFeatures(manifest.Resolve(r.reference_path));
    if (data.references[i].rows() != data.inputs[i].data.rows())
      throw ShapeError(r.id + ": reference has " +
                       std::to_string(data.references[i].rows()) +
                       " frames, input has " +
                       std::to_string(data.inputs[i].data.rows()));
  });
  return data;
}

namespace {

Dataset BuildDataset(const SplitData &data, const NormalizationSpec &norm,
                     int context) {
  Eigen::Index rows = 0;
  for (const auto &r : data.references) rows += r.rows();
  Dataset ds;
  if (data.inputs.empty()) return ds;
  const Eigen::Index in_dim = (2 * context + 1) * data.inputs.front().data.cols();
  const Eigen::Index out_dim = data.references.front().cols();
  ds.inputs.resize(rows, in_dim);
  ds.targets.resize(rows, out_dim);
  Eigen::Index at = 0;
  for (size_t u = 0; u < data.inputs.size(); ++u) {
    const Eigen::Index n = data.references[u].rows();
    if (n == 0) continue;
    const RealMatrix x =
        Normalize(AssembleContext(data.inputs[u].data, context), norm, FeatureRole::kInput);
    const RealMatrix y = Normalize(data.references[u], norm, FeatureRole::kReference);
    ds.inputs.middleRows(at, n) = x.cast<float>();
    ds.targets.middleRows(at, n) = y.cast<float>();
    at += n;
  }
  return ds;
}

}  // namespace

TrainedModel TrainSfmModel(const CorpusManifest &manifest,
                           const SfmTrainOptions &opts) {
  const bool have_dev = !manifest.BySplit(Split::kDev).empty();
  if (opts.train.early_stop.enabled && !have_dev)
    throw ConfigError(
        "early stopping (cross-validation) requires a dev split in the manifest");
  if (manifest.BySplit(Split::kTrain).empty())
    throw ConfigError("manifest has no train split");

  TrainedModel out;
  const SplitData train = LoadSplit(manifest, Split::kTrain, opts);
  SplitData dev;
  if (have_dev) dev = LoadSplit(manifest, Split::kDev, opts);

  NormalizationSpec norm;
  norm.input_mode = opts.input_norm;
  norm.reference_mode = opts.reference_norm;
  norm.epsilon = opts.norm_epsilon;
  if (norm.input_mode == InputNorm::kGlobalMvn) {
    MvnAccumulator acc;
    for (const auto &s : train.inputs) acc.Add(AssembleContext(s.data, opts.context));
    acc.Finish(&norm.input_mean, &norm.input_var);
    int clamped = 0;
    for (Eigen::Index i = 0; i < norm.input_var.size(); ++i)
      if (norm.input_var[i] < norm.epsilon) {
        norm.input_var[i] = norm.epsilon;
        ++clamped;
      }
    if (clamped)
      out.warnings.push_back(std::to_string(clamped) +
                             " input dimension(s) with variance below epsilon");
  }
  FitReferenceStats(train.references, &norm, &out.warnings);
  for (const auto &w : out.warnings) spdlog::warn("normalizer: {}", w);

  const Dataset train_ds = BuildDataset(train, norm, opts.context);
  const Dataset dev_ds = BuildDataset(dev, norm, opts.context);

  std::vector<int> dims = {static_cast<int>(train_ds.inputs.cols())};
  dims.insert(dims.end(), opts.hidden_units.begin(), opts.hidden_units.end());
  dims.push_back(static_cast<int>(train_ds.targets.cols()));

  MlpModel &model = out.model;
  model.seed = opts.seed;
  model.context = opts.context;
  model.norm = norm;
  model.config_text = TrainOptionsText(opts);
  model.net = InitMlp<float>(dims, opts.output_activation, DeriveSeed(opts.seed, "init"));
  spdlog::info("training {} recipe on {} frames ({} dev), {} inputs, {} hidden layers, {} outputs",
               TrainRecipeName(opts.recipe), train_ds.Size(), dev_ds.Size(),
               dims.front(), dims.size() - 2, dims.back());
  out.history = Train(&model.net, train_ds, have_dev ? &dev_ds : nullptr, opts.train);
  return out;
}

}  // namespace sfm
