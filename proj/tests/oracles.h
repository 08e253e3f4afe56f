// sfmdnn/tests/oracles.h

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

// Slow, independent reference implementations used only by the tests.
// None of them call into the library.

#ifndef SFMDNN_TESTS_ORACLES_H_
#define SFMDNN_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using CMat = std::vector<std::vector<cd>>;

// X[b] = sum_n x[n] exp(-2 pi i b n / n_fft), b = 0..n_fft/2; x is
// zero-padded to n_fft.
inline std::vector<cd> Dft(const std::vector<double> &x, int n_fft) {
  std::vector<cd> out(n_fft / 2 + 1);
  for (int b = 0; b <= n_fft / 2; ++b) {
    cd acc = 0.0;
    for (size_t n = 0; n < x.size(); ++n) {
      const double ph = -2.0 * M_PI * static_cast<double>(b) * static_cast<double>(n) / n_fft;
      acc += x[n] * cd(std::cos(ph), std::sin(ph));
    }
    out[b] = acc;
  }
  return out;
}

// Real inverse DFT of a half spectrum of an n_fft-point real signal.
inline std::vector<double> InverseDft(const std::vector<cd> &half, int n_fft) {
  std::vector<double> out(n_fft);
  for (int n = 0; n < n_fft; ++n) {
    double acc = 0.0;
    for (int b = 0; b < n_fft; ++b) {
      const cd v = b <= n_fft / 2 ? half[b] : std::conj(half[n_fft - b]);
      const double ph = 2.0 * M_PI * b * n / n_fft;
      acc += (v * cd(std::cos(ph), std::sin(ph))).real();
    }
    out[n] = acc / n_fft;
  }
  return out;
}

// Gaussian elimination with partial pivoting.
inline std::vector<cd> Solve(CMat a, std::vector<cd> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (size_t r = col + 1; r < n; ++r) {
      const cd f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<cd> x(n);
  for (size_t i = n; i-- > 0;) {
    cd acc = b[i];
    for (size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

inline std::vector<double> Convolve(const std::vector<double> &a,
                                    const std::vector<double> &b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Periodic Hann window.
inline std::vector<double> Hann(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
  return w;
}

// WPE for one bin, written directly from the update equations.
struct WpeBin {
  std::vector<cd> xhat;
  std::vector<cd> g;
  std::vector<double> lambda;
};

inline WpeBin Wpe(const std::vector<cd> &y, int taps, int delay, int iterations,
                  double floor, double rel_reg) {
  const int T = static_cast<int>(y.size());
  WpeBin out;
  out.xhat = y;
  out.g.assign(taps, 0.0);
  out.lambda.assign(T, 0.0);
  double delta = 0.0;
  for (int it = 0; it < iterations; ++it) {
    for (int t = 0; t < T; ++t) out.lambda[t] = std::max(std::norm(out.xhat[t]), floor);
    CMat R(taps, std::vector<cd>(taps, 0.0));
    std::vector<cd> r(taps, 0.0);
    for (int t = delay + taps - 1; t < T; ++t)
      for (int i = 0; i < taps; ++i) {
        const cd yi = y[t - delay - i];
        r[i] += yi * std::conj(y[t]) / out.lambda[t];
        for (int j = 0; j < taps; ++j)
          R[i][j] += yi * std::conj(y[t - delay - j]) / out.lambda[t];
      }
    if (it == 0) {
      double trace = 0.0;
      for (int i = 0; i < taps; ++i) trace += R[i][i].real();
      delta = rel_reg * trace / taps;
    }
    for (int i = 0; i < taps; ++i) R[i][i] += delta;
    out.g = Solve(R, r);
    for (int t = delay + taps - 1; t < T; ++t) {
      cd pred = 0.0;
      for (int i = 0; i < taps; ++i) pred += std::conj(out.g[i]) * y[t - delay - i];
      out.xhat[t] = y[t] - pred;
    }
  }
  return out;
}

// The two cross-validation rules applied to a dev-cost sequence. Returns
// {epochs run, epoch whose parameters are kept, reason}.
struct StopOutcome {
  int epochs;
  int kept;
  std::string reason;
};

inline StopOutcome EarlyStop(const std::vector<double> &dev, double inc, double imp) {
  for (size_t e = 1; e < dev.size(); ++e) {
    if (dev[e] > dev[e - 1] * (1.0 + inc)) return {int(e) + 1, int(e), "dev_increase"};
    if (dev[e - 1] - dev[e] < imp * dev[e - 1]) return {int(e) + 1, int(e), "dev_plateau"};
  }
  return {int(dev.size()), int(dev.size()), "max_epochs"};
}

// Self-deleting scratch directory.
class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("sfmdnn-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::string operator/(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle

#endif  // SFMDNN_TESTS_ORACLES_H_
