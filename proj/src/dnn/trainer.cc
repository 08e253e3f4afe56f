// sfmdnn/src/dnn/trainer.cc

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

#include "sfmdnn/dnn/trainer.h"

#include <numeric>

#include <spdlog/spdlog.h>

namespace sfm {

const char *OutputActivationName(OutputActivation a) {
  return a == OutputActivation::kSigmoid ? "sigmoid" : "linear";
}

OutputActivation ParseOutputActivation(const std::string &name) {
  if (name == "sigmoid") return OutputActivation::kSigmoid;
  if (name == "linear") return OutputActivation::kLinear;
  throw ConfigError("unknown output activation '" + name + "'");
}

void ValidateTrainConfig(const TrainConfig &cfg) {
  if (cfg.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (!(cfg.learning_rate > 0.0))
    throw ConfigError("train: learning_rate must be > 0");
  if (cfg.max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
  if (!(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0))
    throw ConfigError("train: dropout_rate must be in [0, 1)");
  if (!(cfg.adagrad_epsilon > 0.0))
    throw ConfigError("train: adagrad_epsilon must be > 0");
  if (!(cfg.early_stop.increase_threshold > 0.0) ||
      !(cfg.early_stop.improvement_threshold > 0.0))
    throw ConfigError("train: early-stop thresholds must be > 0");
}

const char *StopReasonName(StopReason r) {
  switch (r) {
    case StopReason::kMaxEpochs:
      return "max_epochs";
    case StopReason::kDevIncrease:
      return "dev_increase";
    case StopReason::kDevPlateau:
      return "dev_plateau";
  }
  return "unknown";
}

StopDecision CheckEarlyStop(double previous, double current,
                            const EarlyStopConfig &cfg) {
  if (current > previous * (1.0 + cfg.increase_threshold))
    return StopDecision::kDevIncrease;
  if (previous - current < cfg.improvement_threshold * previous)
    return StopDecision::kDevPlateau;
  return StopDecision::kContinue;
}

double EvaluateMse(const MlpNet<float> &net, const Dataset &data) {
  constexpr Eigen::Index kChunk = 1024;
  double sum = 0.0;
  ForwardCache<float> cache;
  for (Eigen::Index start = 0; start < data.Size(); start += kChunk) {
    const Eigen::Index n = std::min(kChunk, data.Size() - start);
    Forward<float>(net, data.inputs.middleRows(start, n), nullptr, &cache);
    sum += (cache.Output() - data.targets.middleRows(start, n))
               .cast<double>()
               .squaredNorm();
  }
  const double count = static_cast<double>(data.Size()) * net.OutputDim();
  return count > 0 ? sum / count : 0.0;
}

TrainHistory Train(MlpNet<float> *net, const Dataset &train, const Dataset *dev,
                   const TrainConfig &cfg) {
  ValidateTrainConfig(cfg);
  if (train.Size() == 0) throw ConfigError("train: empty training set");
  if (train.inputs.cols() != net->InputDim() ||
      train.targets.cols() != net->OutputDim())
    throw ShapeError("train: dataset dimensions do not match the network");
  const bool have_dev = dev != nullptr && dev->Size() > 0;
  if (cfg.early_stop.enabled && !have_dev)
    throw ConfigError("train: early stopping requires a non-empty dev set");

  Rng shuffle_rng(cfg.shuffle_seed);
  Rng dropout_rng(cfg.dropout_seed);
  auto state = AdagradState<float>::Zeros(*net);
  std::vector<Eigen::Index> order(train.Size());
  std::iota(order.begin(), order.end(), 0);

  auto train_epoch = [&](MlpNet<float> *model, int epoch) {
    shuffle_rng.Shuffle(&order);
    double weighted = 0.0;
    Eigen::MatrixXf batch, refs;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t n = std::min<size_t>(cfg.batch_size, order.size() - start);
      batch.resize(n, train.inputs.cols());
      refs.resize(n, train.targets.cols());
      for (size_t i = 0; i < n; ++i) {
        batch.row(i) = train.inputs.row(order[start + i]);
        refs.row(i) = train.targets.row(order[start + i]);
      }
      double loss;
      if (cfg.dropout_rate > 0.0) {
        auto masks = SampleDropoutMasks(*model, static_cast<int>(n),
                                        cfg.dropout_rate, &dropout_rng);
        loss = TrainStep(model, batch, refs, cfg, &state, &masks);
      } else {
        loss = TrainStep(model, batch, refs, cfg, &state);
      }
      weighted += loss * static_cast<double>(n);
    }
    const double cost = weighted / static_cast<double>(order.size());
    spdlog::info("epoch {}: train mse {:.6f}", epoch, cost);
    return cost;
  };
  std::function<double(const MlpNet<float> &)> dev_fn;
  if (have_dev)
    dev_fn = [dev](const MlpNet<float> &model) {
      const double c = EvaluateMse(model, *dev);
      spdlog::info("  dev mse {:.6f}", c);
      return c;
    };
  return RunEpochs<MlpNet<float>>(net, cfg, train_epoch, dev_fn);
}

}  // namespace sfm
