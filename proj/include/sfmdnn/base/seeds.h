// sfmdnn/include/sfmdnn/base/seeds.h

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

#ifndef SFMDNN_BASE_SEEDS_H_
#define SFMDNN_BASE_SEEDS_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sfm {

// 64-bit FNV-1a. Used for config hashes and seed derivation; stable across
// platforms, unlike std::hash.
uint64_t Fnv1a64(std::string_view bytes);

// Per-purpose seed derived from the single user-visible seed:
//   DeriveSeed(seed, "init"), "shuffle", "dropout", "corpus", ...
// splitmix64(seed ^ fnv1a64(purpose)).
uint64_t DeriveSeed(uint64_t seed, std::string_view purpose);

// Thin wrapper over mt19937_64 with portable draws. The std distributions
// are implementation-defined, so bit-reproducible runs go through here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  uint64_t Below(uint64_t n);
  // Box-Muller; one cached value.
  double Gaussian();
  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T> *v) {
    for (size_t i = v->size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap((*v)[i - 1], (*v)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace sfm

#endif  // SFMDNN_BASE_SEEDS_H_
