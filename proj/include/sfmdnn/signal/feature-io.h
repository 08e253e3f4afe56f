// sfmdnn/include/sfmdnn/signal/feature-io.h

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

#ifndef SFMDNN_SIGNAL_FEATURE_IO_H_
#define SFMDNN_SIGNAL_FEATURE_IO_H_

#include <string>
#include <vector>

#include "sfmdnn/base/types.h"

namespace sfm {

// Feature container:
//   "SFMF" | u32 version (=1) | u32 rows | u32 cols | rows*cols f32
// All integers and floats little-endian, payload row-major. Values are
// rounded to f32 on write.
constexpr uint32_t kFeatureFormatVersion = 1;

std::vector<unsigned char> SerializeFeatures(const RealMatrix &m);
RealMatrix ParseFeatures(const std::vector<unsigned char> &bytes);

void WriteFeatures(const RealMatrix &m, const std::string &path);
RealMatrix ReadFeatures(const std::string &path);

}  // namespace sfm

#endif  // SFMDNN_SIGNAL_FEATURE_IO_H_
