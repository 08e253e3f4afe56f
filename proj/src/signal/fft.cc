// sfmdnn/src/signal/fft.cc

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

#include "sfmdnn/signal/fft.h"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "sfmdnn/base/errors.h"

namespace sfm {

namespace {
std::mutex &PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealFft::RealFft(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n <= 0) throw ConfigError("fft: size must be positive");
  std::vector<double> real(n);
  std::vector<fftw_complex> spec(n / 2 + 1);
  std::lock_guard<std::mutex> lock(PlannerMutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward =
      fftw_plan_dft_r2c_1d(n, real.data(), spec.data(), flags);
  plans_->inverse =
      fftw_plan_dft_c2r_1d(n, spec.data(), real.data(), flags | FFTW_DESTROY_INPUT);
  if (!plans_->forward || !plans_->inverse)
    throw Error("fft: plan creation failed for size " + std::to_string(n));
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<Complex> out) const {
  if (static_cast<int>(in.size()) != n_ ||
      static_cast<int>(out.size()) != NumBins())
    throw ShapeError("fft: forward buffer size mismatch");
  std::vector<double> buf(in.begin(), in.end());
  fftw_execute_dft_r2c(plans_->forward, buf.data(),
                       reinterpret_cast<fftw_complex *>(out.data()));
}

void RealFft::Inverse(std::span<const Complex> in,
                      std::span<double> out) const {
  if (static_cast<int>(in.size()) != NumBins() ||
      static_cast<int>(out.size()) != n_)
    throw ShapeError("fft: inverse buffer size mismatch");
  std::vector<Complex> buf(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->inverse,
                       reinterpret_cast<fftw_complex *>(buf.data()),
                       out.data());
  const double scale = 1.0 / n_;
  for (double &v : out) v *= scale;
}

}  // namespace sfm
