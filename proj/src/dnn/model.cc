// sfmdnn/src/dnn/model.cc

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

#include "sfmdnn/dnn/model.h"

#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/kv-config.h"
#include "sfmdnn/dnn/context.h"

namespace sfm {

namespace {

void PutVector(ByteWriter *out, const RealVector &v) {
  out->PutU32(static_cast<uint32_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out->PutF64(v[i]);
}

RealVector GetVector(ByteReader *in) {
  const uint32_t n = in->GetU32();
  in->Need(static_cast<size_t>(n) * 8);
  RealVector v(n);
  for (uint32_t i = 0; i < n; ++i) v[i] = in->GetF64();
  return v;
}

}  // namespace

std::vector<unsigned char> SerializeModel(const MlpModel &model) {
  const auto &net = model.net;
  ByteWriter out;
  out.PutBytes("SFMD");
  out.PutU32(kCheckpointVersion);
  out.PutU32(static_cast<uint32_t>(net.NumLayers()));
  for (const auto &w : net.weights) {
    out.PutU32(static_cast<uint32_t>(w.rows()));
    out.PutU32(static_cast<uint32_t>(w.cols()));
  }
  for (const auto &w : net.weights)
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) out.PutF32(w(r, c));
  for (const auto &b : net.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) out.PutF32(b[i]);

  const auto &n = model.norm;
  out.PutU32(static_cast<uint32_t>(n.input_mode));
  out.PutU32(static_cast<uint32_t>(n.reference_mode));
  out.PutF64(n.epsilon);
  for (const RealVector *v : {&n.input_mean, &n.input_var, &n.ref_min,
                              &n.ref_max, &n.ref_mean, &n.ref_std})
    PutVector(&out, *v);

  std::string text = "model.output_activation=" +
                     std::string(OutputActivationName(net.output_activation)) +
                     "\nmodel.context=" + std::to_string(model.context) +
                     "\nmodel.seed=" + std::to_string(model.seed) + "\n" +
                     model.config_text;
  out.PutU32(static_cast<uint32_t>(text.size()));
  out.PutBytes(text);
  return std::move(out.Buffer());
}

MlpModel ParseModel(const std::vector<unsigned char> &bytes) {
  ByteReader in(bytes.data(), bytes.size(), "checkpoint");
  if (in.GetBytes(4) != "SFMD") throw FormatError("checkpoint: bad magic");
  const uint32_t version = in.GetU32();
  if (version != kCheckpointVersion)
    throw UnsupportedError("checkpoint: unsupported version " +
                           std::to_string(version));
  const uint32_t layers = in.GetU32();
  if (layers == 0 || layers > 64) throw FormatError("checkpoint: bad layer count");
  MlpModel model;
  auto &net = model.net;
  std::vector<std::pair<uint32_t, uint32_t>> shapes(layers);
  for (auto &[rows, cols] : shapes) {
    rows = in.GetU32();
    cols = in.GetU32();
  }
  net.dims.push_back(static_cast<int>(shapes[0].second));
  for (uint32_t l = 0; l < layers; ++l) {
    if (shapes[l].second != static_cast<uint32_t>(net.dims.back()))
      throw FormatError("checkpoint: layer dimensions do not chain");
    net.dims.push_back(static_cast<int>(shapes[l].first));
  }
  for (const auto &[rows, cols] : shapes) {
    in.Need(static_cast<size_t>(rows) * cols * 4);
    Eigen::MatrixXf w(rows, cols);
    for (uint32_t r = 0; r < rows; ++r)
      for (uint32_t c = 0; c < cols; ++c) w(r, c) = in.GetF32();
    net.weights.push_back(std::move(w));
  }
  for (const auto &[rows, cols] : shapes) {
    in.Need(static_cast<size_t>(rows) * 4);
    Eigen::VectorXf b(rows);
    for (uint32_t i = 0; i < rows; ++i) b[i] = in.GetF32();
    net.biases.push_back(std::move(b));
  }

  auto &n = model.norm;
  const uint32_t input_mode = in.GetU32(), ref_mode = in.GetU32();
  if (input_mode > 1 || ref_mode > 1)
    throw FormatError("checkpoint: bad normalisation mode");
  n.input_mode = static_cast<InputNorm>(input_mode);
  n.reference_mode = static_cast<ReferenceNorm>(ref_mode);
  n.epsilon = in.GetF64();
  for (RealVector *v : {&n.input_mean, &n.input_var, &n.ref_min, &n.ref_max,
                        &n.ref_mean, &n.ref_std})
    *v = GetVector(&in);

  const uint32_t len = in.GetU32();
  std::string text = in.GetBytes(len);
  if (in.Remaining() != 0) throw FormatError("checkpoint: trailing bytes");
  KvConfig kv = KvConfig::FromText(text);
  net.output_activation =
      ParseOutputActivation(kv.GetString("model.output_activation", "sigmoid"));
  model.context = static_cast<int>(kv.GetInt("model.context", 5));
  model.seed = kv.GetUint64("model.seed", 0);
  // Everything after the three model.* lines is the training config verbatim.
  size_t pos = 0;
  for (int i = 0; i < 3 && pos != std::string::npos; ++i) {
    pos = text.find('\n', pos);
    if (pos != std::string::npos) ++pos;
  }
  model.config_text = pos == std::string::npos ? "" : text.substr(pos);
  return model;
}

void SaveModel(const MlpModel &model, const std::string &path) {
  WriteFileBytes(path, SerializeModel(model));
}

MlpModel LoadModel(const std::string &path) {
  return ParseModel(ReadFileBytes(path));
}

MappedFeatures MapFeatures(const MlpModel &model, const LogSpectrogram &spec) {
  const int expected = model.net.InputDim();
  const int width = (2 * model.context + 1) * static_cast<int>(spec.data.cols());
  if (width != expected)
    throw ShapeError("map_features: context window has " +
                     std::to_string(width) + " values, model expects " +
                     std::to_string(expected));
  RealMatrix x = Normalize(AssembleContext(spec.data, model.context),
                           model.norm, FeatureRole::kInput);
  MappedFeatures out;
  out.reference_stats = ReferenceInversionStats(model.norm);
  if (x.rows() == 0) {
    out.normalized.data.resize(0, model.net.OutputDim());
    out.denormalized.data.resize(0, model.net.OutputDim());
    return out;
  }
  ForwardCache<float> cache;
  Forward<float>(model.net, x.cast<float>(), nullptr, &cache);
  out.normalized.data = cache.Output().cast<double>();
  out.denormalized.data = InvertAffine(out.normalized.data, out.reference_stats);
  return out;
}

}  // namespace sfm
