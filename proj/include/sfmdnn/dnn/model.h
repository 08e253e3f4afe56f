// sfmdnn/include/sfmdnn/dnn/model.h

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

#ifndef SFMDNN_DNN_MODEL_H_
#define SFMDNN_DNN_MODEL_H_

#include <optional>
#include <string>
#include <vector>

#include "sfmdnn/dnn/mlp.h"
#include "sfmdnn/dnn/normalizer.h"
#include "sfmdnn/signal/mel.h"
#include "sfmdnn/signal/stft.h"

namespace sfm {

// The spectral feature mapping network together with everything needed to
// apply it: normalisation statistics, context width and provenance.
struct MlpModel {
  MlpNet<float> net;
  NormalizationSpec norm;
  int context = 5;
  uint64_t seed = 0;
  // key=value text of the configuration the model was trained with.
  std::string config_text;

  int NumBins() const { return net.InputDim() / (2 * context + 1); }
};

// Checkpoint layout (little-endian):
//   "SFMD" | u32 version (=1) | u32 num_layers
//   num_layers x (u32 rows, u32 cols)            weights are rows=out, cols=in
//   all weights, layer by layer, row-major f32
//   all biases, layer by layer, f32
//   normalisation: u32 input_mode | u32 reference_mode | f64 epsilon |
//     6 x (u32 n | n x f64) for input_mean, input_var, ref_min, ref_max,
//     ref_mean, ref_std
//   u32 length | key=value text with model.output_activation, model.context,
//     model.seed followed by the training config
constexpr uint32_t kCheckpointVersion = 1;

std::vector<unsigned char> SerializeModel(const MlpModel &model);
MlpModel ParseModel(const std::vector<unsigned char> &bytes);
void SaveModel(const MlpModel &model, const std::string &path);
MlpModel LoadModel(const std::string &path);

struct MappedFeatures {
  MelFeatures normalized;    // network output
  MelFeatures denormalized;  // mapped back to the log-Mel domain
  AffineStats reference_stats;  // statistics used for the inversion
};

// assemble_context -> input normalisation -> forward (no dropout).
// Throws ShapeError if (2*context+1)*bins differs from the network input.
MappedFeatures MapFeatures(const MlpModel &model, const LogSpectrogram &spec);

}  // namespace sfm

#endif  // SFMDNN_DNN_MODEL_H_
