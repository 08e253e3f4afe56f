// sfmdnn/src/dnn/context.cc

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

#include "sfmdnn/dnn/context.h"

#include <algorithm>

#include "sfmdnn/base/errors.h"

namespace sfm {

RealMatrix AssembleContext(const RealMatrix &frames, int context) {
  if (context < 0) throw ConfigError("context: must be >= 0");
  const Eigen::Index T = frames.rows(), B = frames.cols();
  const Eigen::Index width = 2 * context + 1;
  RealMatrix out(T, width * B);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index j = 0; j < width; ++j) {
      const Eigen::Index src = std::clamp<Eigen::Index>(t - context + j, 0, T - 1);
      out.block(t, j * B, 1, B) = frames.row(src);
    }
  }
  return out;
}

}  // namespace sfm
