// sfmdnn/tests/pipeline-test.cc

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

#include <chrono>
#include <filesystem>

#include "oracles.h"
#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/errors.h"
#include "sfmdnn/corpus/corpus.h"
#include "sfmdnn/eval/metrics.h"
#include "sfmdnn/pipeline/pipeline.h"
#include "sfmdnn/pipeline/training.h"
#include "sfmdnn/signal/feature-io.h"

using namespace sfm;
namespace fs = std::filesystem;

namespace {

// One small reverberant, noisy corpus shared by the cases below.
const CorpusManifest &SmallCorpus() {
  static oracle::TempDir dir("pipeline");
  static const CorpusManifest m = [] {
    CorpusConfig c;
    c.seed = 7;
    c.train_utterances = 1;
    c.dev_utterances = 1;
    c.test_utterances = 1;
    c.speech.min_duration = 1.5;
    c.speech.max_duration = 2.0;
    c.rir_seconds = 0.3;
    return BuildCorpus(c, dir / "corpus");
  }();
  return m;
}

SfmTrainOptions ToyOptions() {
  SfmTrainOptions o = RecipeDefaults(TrainRecipe::kOriginal, 3);
  o.hidden_units = {32, 32};
  o.train.max_epochs = 300;
  o.train.batch_size = 32;
  return o;
}

std::shared_ptr<const MlpModel> ToyModel() {
  static const auto model =
      std::make_shared<const MlpModel>(TrainSfmModel(SmallCorpus(), ToyOptions()).model);
  return model;
}

Waveform Noisy(const MixRecipe &r) { return LoadWav(SmallCorpus().Resolve(r.noisy_path)); }

RealMatrix Reference(const MixRecipe &r) {
  return ReadFeatures(SmallCorpus().Resolve(r.reference_path));
}

std::string ReadText(const std::string &path) {
  const auto bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

PipelineConfig Mode(PipelineMode mode) {
  PipelineConfig c;
  c.mode = mode;
  c.features = SmallCorpus().features;
  if (UsesDnn(mode)) c.model = ToyModel();
  return c;
}

}  // namespace

TEST_CASE("baseline equals the feature pipeline") {
  const auto &r = *SmallCorpus().BySplit(Split::kTest).front();
  const Waveform clean = LoadWav(SmallCorpus().Resolve(r.clean_path));
  const EnhanceResult e = EnhanceUtterance(clean, Mode(PipelineMode::kBaseline));
  CHECK(e.features.data == ComputeLogMel(clean, SmallCorpus().features).data);
  CHECK(!e.enhanced);
  CHECK(SerializeFeatures(e.features.data) ==
        SerializeFeatures(ComputeLogMel(clean, SmallCorpus().features).data));
}

TEST_CASE("every mode keeps the frame count") {
  const auto &r = *SmallCorpus().BySplit(Split::kTest).front();
  const Waveform w = Noisy(r);
  const auto frames = EnhanceUtterance(w, Mode(PipelineMode::kBaseline)).features.data.rows();
  for (PipelineMode m : {PipelineMode::kWpeOnly, PipelineMode::kDnnOnly, PipelineMode::kWpeDnn}) {
    const EnhanceResult e = EnhanceUtterance(w, Mode(m));
    CHECK(e.features.data.rows() == frames);
    CHECK(e.features.data.cols() == 40);
    CHECK(e.enhanced.has_value() == UsesWpe(m));
    if (e.enhanced) CHECK(e.enhanced->samples.size() == w.samples.size());
  }
}

TEST_CASE("wpe_dnn is dnn_only applied to the WPE output") {
  const auto &r = *SmallCorpus().BySplit(Split::kTest).front();
  const Waveform w = Noisy(r);
  const EnhanceResult cascade = EnhanceUtterance(w, Mode(PipelineMode::kWpeDnn));
  const EnhanceResult dnn = EnhanceUtterance(*cascade.enhanced, Mode(PipelineMode::kDnnOnly));
  CHECK(cascade.features.data == dnn.features.data);

  PipelineConfig direct = Mode(PipelineMode::kWpeDnn);
  direct.resynthesize = false;
  const EnhanceResult d = EnhanceUtterance(w, direct);
  const auto spec = WpeDereverberate(Stft(w, direct.features.stft), direct.wpe);
  const auto mapped = MapFeatures(*ToyModel(), LogMagnitude(spec.enhanced, direct.features.log_floor));
  CHECK(d.features.data == mapped.denormalized.data);

  const EnhanceResult wpe = EnhanceUtterance(w, Mode(PipelineMode::kWpeOnly));
  CHECK(wpe.enhanced->samples == cascade.enhanced->samples);
}

TEST_CASE("trained toy model beats the untrained one on its own utterance") {
  const auto &r = *SmallCorpus().BySplit(Split::kTrain).front();
  const Waveform w = Noisy(r);
  const RealMatrix ref = Reference(r);
  const double trained = MelMse(EnhanceUtterance(w, Mode(PipelineMode::kDnnOnly)).features.data, ref);

  MlpModel untrained = *ToyModel();
  const SfmTrainOptions o = ToyOptions();
  std::vector<int> dims = {untrained.net.InputDim(), 32, 32, 40};
  untrained.net = InitMlp<float>(dims, o.output_activation, 99);
  PipelineConfig c = Mode(PipelineMode::kDnnOnly);
  c.model = std::make_shared<const MlpModel>(untrained);
  const double fresh = MelMse(EnhanceUtterance(w, c).features.data, ref);
  MESSAGE("mel mse trained " << trained << ", untrained " << fresh);
  CHECK(trained * 10 <= fresh);
}

TEST_CASE("pipeline config validation") {
  PipelineConfig c = Mode(PipelineMode::kDnnOnly);
  c.model = nullptr;
  CHECK_THROWS_AS(ValidatePipelineConfig(c), ConfigError);
  c = Mode(PipelineMode::kDnnOnly);
  c.features.stft.fft_size = 256;
  c.features.stft.frame_len = 256;
  c.features.mel.fft_size = 256;
  CHECK_THROWS_AS(ValidatePipelineConfig(c), ShapeError);
  CHECK(ParsePipelineMode("wpe_dnn") == PipelineMode::kWpeDnn);
  CHECK_THROWS_AS(ParsePipelineMode("dnn_wpe"), ConfigError);
}

TEST_CASE("batch_enhance") {
  oracle::TempDir dir("batch");
  CorpusManifest empty = SmallCorpus();
  empty.recipes.clear();
  const BatchSummary none = BatchEnhance(empty, std::nullopt, Mode(PipelineMode::kBaseline), dir / "empty");
  CHECK(none.succeeded == 0);
  CHECK(none.failed == 0);

  const PipelineConfig cfg = Mode(PipelineMode::kWpeDnn);
  const BatchSummary a = BatchEnhance(SmallCorpus(), Split::kTest, cfg, dir / "a", 1);
  const BatchSummary b = BatchEnhance(SmallCorpus(), Split::kTest, cfg, dir / "b", 3);
  CHECK(a.succeeded == 6);
  CHECK(a.failed == 0);
  CHECK(a.config_hash == b.config_hash);
  for (const auto *r : SmallCorpus().BySplit(Split::kTest)) {
    const std::string f = "features/" + r->id + ".sfmf";
    CHECK(ReadFileBytes(dir / ("a/" + f)) == ReadFileBytes(dir / ("b/" + f)));
    CHECK(fs::exists(dir / ("a/waveforms/" + r->id + ".wav")));
    // Same bytes as enhancing the utterance on its own.
    CHECK(ReadFeatures(dir / ("a/" + f)) ==
          EnhanceUtterance(Noisy(*r), cfg).features.data.cast<float>().cast<double>());
  }
  CHECK(ReadFileBytes(dir / "a/pipeline.txt") == ReadFileBytes(dir / "b/pipeline.txt"));
  const std::string log = ReadText(dir / "a/run.jsonl");
  CHECK(std::count(log.begin(), log.end(), '\n') == 6);
  CHECK(log.find(a.config_hash) != std::string::npos);

  // A broken utterance is recorded and the rest still run.
  CorpusManifest broken = SmallCorpus();
  for (auto &r : broken.recipes)
    if (r.split == Split::kTest) {
      r.noisy_path = "noisy/missing.wav";
      break;
    }
  const BatchSummary c = BatchEnhance(broken, Split::kTest, Mode(PipelineMode::kBaseline), dir / "c");
  CHECK(c.failed == 1);
  CHECK(c.succeeded == 5);
  CHECK(ReadText(dir / "c/run.jsonl").find("\"status\":\"failed\"") != std::string::npos);
}

TEST_CASE("training options and history") {
  KvConfig kv;
  kv.Set("recipe", "enhanced");
  kv.Set("hidden_units", "64,32");
  kv.Set("dropout_rate", "0.1");
  const SfmTrainOptions o = TrainOptionsFromKv(kv, 5);
  CHECK(o.recipe == TrainRecipe::kEnhanced);
  CHECK(o.hidden_units == std::vector<int>{64, 32});
  CHECK(o.train.dropout_rate == 0.1);
  CHECK(o.input_norm == InputNorm::kUtteranceMvn);
  CHECK(o.output_activation == OutputActivation::kLinear);
  CHECK(o.train.early_stop.enabled);
  const SfmTrainOptions orig = RecipeDefaults(TrainRecipe::kOriginal, 5);
  CHECK(orig.output_activation == OutputActivation::kSigmoid);
  CHECK(orig.reference_norm == ReferenceNorm::kGlobalMinMax01);
  CHECK(orig.train.dropout_rate == 0.0);
  CHECK(!orig.train.early_stop.enabled);

  TrainHistory h;
  h.train_cost = {3.0, 2.0, 1.5};
  h.dev_cost = {3.5, 2.5, NAN};
  h.stop_reason = StopReason::kDevPlateau;
  h.best_epoch = 2;
  const TrainHistory back = TrainHistoryFromJson(TrainHistoryToJson(h));
  CHECK(back.train_cost == h.train_cost);
  CHECK(back.dev_cost[1] == 2.5);
  CHECK(std::isnan(back.dev_cost[2]));
  CHECK(back.stop_reason == h.stop_reason);
  CHECK(back.best_epoch == 2);

  CorpusManifest no_dev = SmallCorpus();
  std::erase_if(no_dev.recipes, [](const MixRecipe &r) { return r.split == Split::kDev; });
  try {
    TrainSfmModel(no_dev, RecipeDefaults(TrainRecipe::kEnhanced, 1));
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("cross-validation") != std::string::npos);
  }
}

TEST_CASE("matched training sees WPE inputs") {
  SfmTrainOptions o = ToyOptions();
  o.wpe_input = true;
  const SplitData plain = LoadSplit(SmallCorpus(), Split::kTrain, ToyOptions());
  const SplitData matched = LoadSplit(SmallCorpus(), Split::kTrain, o);
  const auto &r = *SmallCorpus().BySplit(Split::kTrain).front();
  CHECK(plain.inputs[0].data == NetworkInput(Noisy(r), SmallCorpus().features, nullptr).data);
  CHECK(matched.inputs[0].data == NetworkInput(Noisy(r), SmallCorpus().features, &o.wpe).data);
  CHECK(plain.references[0] == matched.references[0]);
}
