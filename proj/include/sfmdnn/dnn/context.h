// sfmdnn/include/sfmdnn/dnn/context.h

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

#ifndef SFMDNN_DNN_CONTEXT_H_
#define SFMDNN_DNN_CONTEXT_H_

#include "sfmdnn/base/types.h"

namespace sfm {

// Stacks frames t-context .. t+context into row t of a
// T x ((2*context+1)*B) matrix. Out-of-range neighbours replicate the
// nearest edge frame. An empty input yields an empty matrix.
RealMatrix AssembleContext(const RealMatrix &frames, int context);

}  // namespace sfm

#endif  // SFMDNN_DNN_CONTEXT_H_
