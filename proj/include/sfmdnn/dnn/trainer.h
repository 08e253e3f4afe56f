// sfmdnn/include/sfmdnn/dnn/trainer.h

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

#ifndef SFMDNN_DNN_TRAINER_H_
#define SFMDNN_DNN_TRAINER_H_

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sfmdnn/dnn/mlp.h"

namespace sfm {

struct EarlyStopConfig {
  bool enabled = false;
  // Stop when dev cost rises by more than this fraction of the previous
  // epoch's cost ...
  double increase_threshold = 0.01;
  // ... or falls by less than this fraction of it.
  double improvement_threshold = 0.001;
};

struct TrainConfig {
  int batch_size = 256;
  double learning_rate = 0.01;
  int max_epochs = 50;
  double dropout_rate = 0.0;
  double adagrad_epsilon = 1e-8;
  EarlyStopConfig early_stop;
  uint64_t shuffle_seed = 1;
  uint64_t dropout_seed = 2;
};

void ValidateTrainConfig(const TrainConfig &cfg);

enum class StopReason { kMaxEpochs, kDevIncrease, kDevPlateau };
const char *StopReasonName(StopReason r);

struct TrainHistory {
  std::vector<double> train_cost;  // one per completed epoch
  std::vector<double> dev_cost;    // NaN when no dev set
  StopReason stop_reason = StopReason::kMaxEpochs;
  int best_epoch = 0;  // 1-based epoch whose parameters were returned
};

enum class StopDecision { kContinue, kDevIncrease, kDevPlateau };

// The two cross-validation stop rules, comparing the current dev cost with
// the previous epoch's.
StopDecision CheckEarlyStop(double previous, double current,
                            const EarlyStopConfig &cfg);

// Epoch loop shared by Train and its tests. Runs up to cfg.max_epochs epochs
// of `train_epoch` (returning the epoch's train cost) followed by `dev_cost`.
// When a stop rule fires after epoch e, the model is restored to its state
// at the end of epoch e-1 and best_epoch = e-1.
template <typename Model>
TrainHistory RunEpochs(Model *model, const TrainConfig &cfg,
                       const std::function<double(Model *, int)> &train_epoch,
                       const std::function<double(const Model &)> &dev_cost) {
  TrainHistory history;
  Model previous = *model;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (cfg.early_stop.enabled) previous = *model;
    history.train_cost.push_back(train_epoch(model, epoch));
    history.dev_cost.push_back(dev_cost ? dev_cost(*model) : NAN);
    if (cfg.early_stop.enabled && epoch >= 2) {
      const StopDecision d = CheckEarlyStop(
          history.dev_cost[epoch - 2], history.dev_cost[epoch - 1], cfg.early_stop);
      if (d != StopDecision::kContinue) {
        *model = std::move(previous);
        history.stop_reason = d == StopDecision::kDevIncrease
                                  ? StopReason::kDevIncrease
                                  : StopReason::kDevPlateau;
        history.best_epoch = epoch - 1;
        return history;
      }
    }
  }
  history.stop_reason = StopReason::kMaxEpochs;
  history.best_epoch = cfg.max_epochs;
  return history;
}

// Normalised training examples, one row per frame.
struct Dataset {
  Eigen::MatrixXf inputs;
  Eigen::MatrixXf targets;

  Eigen::Index Size() const { return inputs.rows(); }
};

// One mini-batch update: forward (with masks when given), MSE, backprop,
// Adagrad. Returns the batch loss before the update. Throws NumericError if
// the loss is not finite.
template <typename Scalar>
double TrainStep(MlpNet<Scalar> *net,
                 const typename MlpNet<Scalar>::Matrix &batch,
                 const typename MlpNet<Scalar>::Matrix &refs,
                 const TrainConfig &cfg, AdagradState<Scalar> *state,
                 const DropoutMasks<Scalar> *masks = nullptr) {
  ForwardCache<Scalar> cache;
  Forward(*net, batch, masks, &cache);
  const double loss = MseLoss<Scalar>(cache.Output(), refs);
  if (!std::isfinite(loss))
    throw NumericError("train: non-finite loss (" + std::to_string(loss) +
                       "); lower the learning rate");
  const auto grads = Backward(*net, cache, masks, refs);
  ApplyAdagrad(net, grads, state, cfg.learning_rate, cfg.adagrad_epsilon);
  return loss;
}

// Full-set MSE without dropout, evaluated in chunks.
double EvaluateMse(const MlpNet<float> &net, const Dataset &data);

// Mini-batch Adagrad training with seeded per-epoch shuffling and optional
// dropout on hidden layers. A dev set is required when early stopping is on.
TrainHistory Train(MlpNet<float> *net, const Dataset &train, const Dataset *dev,
                   const TrainConfig &cfg);

}  // namespace sfm

#endif  // SFMDNN_DNN_TRAINER_H_
