// sfmdnn/include/sfmdnn/wpe/wpe.h

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

#ifndef SFMDNN_WPE_WPE_H_
#define SFMDNN_WPE_WPE_H_

#include <vector>

#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/types.h"
#include "sfmdnn/signal/stft.h"

namespace sfm {

// Single-channel weighted prediction error dereverberation.
//
// For every frequency bin independently, with y the observed STFT sequence of
// that bin and ytilde[t] = (y[t-D], ..., y[t-D-K+1]) the delayed context,
// iterate:
//   lambda[t] = max(|xhat[t]|^2, variance_floor)          (xhat = y at start)
//   R = sum_t ytilde[t] ytilde[t]^H / lambda[t]
//   r = sum_t ytilde[t] conj(y[t]) / lambda[t]
//   (R + delta I) g = r
//   xhat[t] = y[t] - g^H ytilde[t]
// Sums run over t >= D+K-1; earlier frames are passed through unchanged.
// Each step minimises sum_t |xhat[t]|^2/lambda[t] + ln lambda[t] + delta |g|^2
// over one block of variables, so that objective never increases. delta is
// fixed per bin for the whole run: recomputing it from a later R lets a single
// floored lambda inflate it by orders of magnitude and undo the progress.
struct WpeConfig {
  int taps = 10;
  int delay = 3;
  int iterations = 3;
  double variance_floor = 1e-10;
  // delta = regularization * trace(R) / taps, with R from the first
  // iteration, when relative_regularization; otherwise delta = regularization.
  double regularization = 1e-6;
  bool relative_regularization = true;
};

void ValidateWpeConfig(const WpeConfig &cfg);

struct WpeResult {
  ComplexSpectrogram enhanced;
  ComplexMatrix filters;  // bins x taps, g for each bin
  RealMatrix variance;    // frames x bins, lambda of the last iteration
  int fallback_bins = 0;  // bins whose system was singular (g = 0)
};

// Input with T <= taps + delay frames is returned unchanged with zero
// filters and lambda = max(|y|^2, floor). Bins are processed on up to
// `num_threads` threads; output does not depend on the thread count.
WpeResult WpeDereverberate(const ComplexSpectrogram &y, const WpeConfig &cfg,
                           int num_threads = 1);

class SingularSystemError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Solves (R + delta I) g = r for Hermitian positive semi-definite R by
// Cholesky factorisation.
//   NumericError         non-finite entries, or R not Hermitian within 1e-9
//   SingularSystemError  factorisation fails or the residual
//                        |(R + delta I) g - r| exceeds 1e-6 (|r| + 1)
ComplexVector SolveHermitian(const Eigen::MatrixXcd &R, const ComplexVector &r,
                             double delta);

}  // namespace sfm

#endif  // SFMDNN_WPE_WPE_H_
