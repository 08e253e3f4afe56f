// sfmdnn/include/sfmdnn/signal/fft.h

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

#ifndef SFMDNN_SIGNAL_FFT_H_
#define SFMDNN_SIGNAL_FFT_H_

#include <memory>
#include <span>

#include "sfmdnn/base/types.h"

namespace sfm {

// Real-input DFT of size n, backed by FFTW.
// Forward produces n/2+1 bins (unnormalized); Inverse takes n/2+1 bins and
// returns n samples scaled by 1/n, so Inverse(Forward(x)) == x.
// Plans are created under a global lock; execution is thread-safe.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  int Size() const { return n_; }
  int NumBins() const { return n_ / 2 + 1; }

  void Forward(std::span<const double> in, std::span<Complex> out) const;
  void Inverse(std::span<const Complex> in, std::span<double> out) const;

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace sfm

#endif  // SFMDNN_SIGNAL_FFT_H_
