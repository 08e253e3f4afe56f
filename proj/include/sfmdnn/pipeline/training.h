// sfmdnn/include/sfmdnn/pipeline/training.h

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

#ifndef SFMDNN_PIPELINE_TRAINING_H_
#define SFMDNN_PIPELINE_TRAINING_H_

#include <string>
#include <vector>

#include "sfmdnn/base/kv-config.h"
#include "sfmdnn/corpus/corpus.h"
#include "sfmdnn/dnn/model.h"
#include "sfmdnn/dnn/trainer.h"
#include "sfmdnn/wpe/wpe.h"

namespace sfm {

// original: global MVN input, [0,1] min-max reference, sigmoid output,
//           no dropout, fixed epoch budget.
// enhanced: utterance MVN on input and reference, linear output, dropout,
//           cross-validated early stopping.
enum class TrainRecipe { kOriginal, kEnhanced };

const char *TrainRecipeName(TrainRecipe r);
TrainRecipe ParseTrainRecipe(const std::string &name);

struct SfmTrainOptions {
  TrainRecipe recipe = TrainRecipe::kOriginal;
  std::vector<int> hidden_units = {2048, 2048};
  int context = 5;
  TrainConfig train;
  InputNorm input_norm = InputNorm::kGlobalMvn;
  ReferenceNorm reference_norm = ReferenceNorm::kGlobalMinMax01;
  OutputActivation output_activation = OutputActivation::kSigmoid;
  double norm_epsilon = 1e-6;
  // Matched training for the cascade: WPE is applied to the training inputs.
  bool wpe_input = false;
  WpeConfig wpe;
  bool resynthesize = true;  // as PipelineConfig::resynthesize
  uint64_t seed = 1;
  int jobs = 1;
};

SfmTrainOptions RecipeDefaults(TrainRecipe recipe, uint64_t seed);

// Starts from RecipeDefaults(kv["recipe"]) and applies the remaining keys.
SfmTrainOptions TrainOptionsFromKv(const KvConfig &kv, uint64_t seed);
extern const std::vector<std::string> kTrainConfigKeys;

// Canonical key=value text of the options (stored in checkpoints).
std::string TrainOptionsText(const SfmTrainOptions &opts);

struct TrainedModel {
  MlpModel model;
  TrainHistory history;
  std::vector<std::string> warnings;
};

// Builds train/dev datasets from the manifest (noisy waveforms as input,
// clean log-Mel references as targets), fits normalisation on the train
// split and trains. Throws ConfigError when early stopping is enabled but
// the manifest has no dev split.
TrainedModel TrainSfmModel(const CorpusManifest &manifest,
                           const SfmTrainOptions &opts);

// {"schema_version", "train_cost", "dev_cost" (null entries without a dev
// set), "stop_reason", "best_epoch"}.
std::string TrainHistoryToJson(const TrainHistory &h);
TrainHistory TrainHistoryFromJson(const std::string &json);

// Network-input spectra and references of one split, as the trainer sees
// them before normalisation.
struct SplitData {
  std::vector<std::string> ids;
  std::vector<LogSpectrogram> inputs;
  std::vector<RealMatrix> references;
};

SplitData LoadSplit(const CorpusManifest &manifest, Split split,
                    const SfmTrainOptions &opts);

}  // namespace sfm

#endif  // SFMDNN_PIPELINE_TRAINING_H_
