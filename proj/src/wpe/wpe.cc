// sfmdnn/src/wpe/wpe.cc

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

#include "sfmdnn/wpe/wpe.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include <spdlog/spdlog.h>

namespace sfm {

void ValidateWpeConfig(const WpeConfig &cfg) {
  if (cfg.taps < 1) throw ConfigError("wpe: taps must be >= 1");
  if (cfg.delay < 1) throw ConfigError("wpe: delay must be >= 1");
  if (cfg.iterations < 1) throw ConfigError("wpe: iterations must be >= 1");
  if (!(cfg.variance_floor > 0.0))
    throw ConfigError("wpe: variance_floor must be > 0");
  if (!(cfg.regularization >= 0.0))
    throw ConfigError("wpe: regularization must be >= 0");
}

ComplexVector SolveHermitian(const Eigen::MatrixXcd &R, const ComplexVector &r,
                             double delta) {
  const Eigen::Index k = R.rows();
  if (R.cols() != k || r.size() != k)
    throw ShapeError("solve_hermitian: dimension mismatch");
  if (!R.allFinite() || !r.allFinite() || !std::isfinite(delta))
    throw NumericError("solve_hermitian: non-finite input");
  if (delta < 0.0) throw NumericError("solve_hermitian: delta must be >= 0");
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R - R.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw NumericError("solve_hermitian: matrix is not Hermitian");

  Eigen::MatrixXcd A = R;
  A.diagonal().array() += delta;
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success)
    throw SingularSystemError("solve_hermitian: matrix is not positive definite");
  ComplexVector g = llt.solve(r);
  if (!g.allFinite())
    throw SingularSystemError("solve_hermitian: non-finite solution");
  if ((A * g - r).norm() > 1e-6 * (r.norm() + 1.0))
    throw SingularSystemError("solve_hermitian: residual too large");
  return g;
}

namespace {

struct BinOutput {
  ComplexVector xhat;
  ComplexVector g;
  RealVector lambda;
  bool fallback = false;
};

BinOutput ProcessBin(const ComplexVector &y, const WpeConfig &cfg) {
  const int T = static_cast<int>(y.size());
  const int K = cfg.taps, D = cfg.delay;
  const int first = D + K - 1;
  BinOutput out;
  out.xhat = y;
  out.g = ComplexVector::Zero(K);
  out.lambda.resize(T);
  double delta = cfg.regularization;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    for (int t = 0; t < T; ++t)
      out.lambda[t] = std::max(std::norm(out.xhat[t]), cfg.variance_floor);

    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(K, K);
    ComplexVector r = ComplexVector::Zero(K);
    ComplexVector ctx(K);
    for (int t = first; t < T; ++t) {
      for (int k = 0; k < K; ++k) ctx[k] = y[t - D - k];
      const double inv = 1.0 / out.lambda[t];
      R.noalias() += (inv * ctx) * ctx.adjoint();
      r += ctx * (std::conj(y[t]) * inv);
    }
    // Enforce exact Hermitian symmetry lost to rounding.
    R = 0.5 * (R + R.adjoint()).eval();

    if (iter == 0 && cfg.relative_regularization)
      delta = cfg.regularization * R.trace().real() / K;
    if (r.isZero(0.0)) {
      // Silent bin: g = 0 solves the system whatever R is.
      out.g.setZero();
      out.fallback = false;
    } else try {
      out.g = SolveHermitian(R, r, delta);
      out.fallback = false;
    } catch (const NumericError &) {
      out.g.setZero();
      out.fallback = true;
    }

    for (int t = first; t < T; ++t) {
      Complex pred = 0.0;
      for (int k = 0; k < K; ++k) pred += std::conj(out.g[k]) * y[t - D - k];
      out.xhat[t] = y[t] - pred;
    }
  }
  return out;
}

}  // namespace

WpeResult WpeDereverberate(const ComplexSpectrogram &y, const WpeConfig &cfg,
                           int num_threads) {
  ValidateWpeConfig(cfg);
  const int T = y.NumFrames(), B = y.NumBins();
  WpeResult result;
  result.enhanced = y;
  result.filters = ComplexMatrix::Zero(B, cfg.taps);
  result.variance.resize(T, B);

  if (T <= cfg.taps + cfg.delay) {
    for (int t = 0; t < T; ++t)
      for (int b = 0; b < B; ++b)
        result.variance(t, b) =
            std::max(std::norm(y.data(t, b)), cfg.variance_floor);
    return result;
  }

  std::vector<BinOutput> bins(B);
  auto worker = [&](int begin, int step) {
    for (int b = begin; b < B; b += step)
      bins[b] = ProcessBin(y.data.col(b), cfg);
  };
  const int workers = std::clamp(num_threads, 1, std::max(1, B));
  if (workers == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker, w, workers);
    for (auto &th : threads) th.join();
  }

  for (int b = 0; b < B; ++b) {
    result.enhanced.data.col(b) = bins[b].xhat;
    result.filters.row(b) = bins[b].g.transpose();
    result.variance.col(b) = bins[b].lambda;
    if (bins[b].fallback) ++result.fallback_bins;
  }
  if (result.fallback_bins > 0)
    spdlog::warn("wpe: {} of {} bins fell back to g = 0", result.fallback_bins, B);
  return result;
}

}  // namespace sfm
