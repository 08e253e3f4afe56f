// sfmdnn/src/signal/feature-io.cc

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

#include "sfmdnn/signal/feature-io.h"

#include <cmath>

#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/errors.h"

namespace sfm {

std::vector<unsigned char> SerializeFeatures(const RealMatrix &m) {
  ByteWriter out;
  out.PutBytes("SFMF");
  out.PutU32(kFeatureFormatVersion);
  out.PutU32(static_cast<uint32_t>(m.rows()));
  out.PutU32(static_cast<uint32_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const float v = static_cast<float>(m(r, c));
      if (!std::isfinite(v)) throw NumericError("features: non-finite value");
      out.PutF32(v);
    }
  return std::move(out.Buffer());
}

RealMatrix ParseFeatures(const std::vector<unsigned char> &bytes) {
  ByteReader in(bytes.data(), bytes.size(), "features");
  if (in.GetBytes(4) != "SFMF") throw FormatError("features: bad magic");
  const uint32_t version = in.GetU32();
  if (version != kFeatureFormatVersion)
    throw UnsupportedError("features: unsupported version " +
                           std::to_string(version));
  const uint32_t rows = in.GetU32(), cols = in.GetU32();
  const uint64_t count = static_cast<uint64_t>(rows) * cols;
  if (in.Remaining() != count * 4)
    throw FormatError("features: payload size does not match header");
  RealMatrix m(rows, cols);
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c) m(r, c) = in.GetF32();
  return m;
}

void WriteFeatures(const RealMatrix &m, const std::string &path) {
  WriteFileBytes(path, SerializeFeatures(m));
}

RealMatrix ReadFeatures(const std::string &path) {
  return ParseFeatures(ReadFileBytes(path));
}

}  // namespace sfm
