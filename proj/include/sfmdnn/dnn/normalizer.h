// sfmdnn/include/sfmdnn/dnn/normalizer.h

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

#ifndef SFMDNN_DNN_NORMALIZER_H_
#define SFMDNN_DNN_NORMALIZER_H_

#include <string>
#include <vector>

#include "sfmdnn/base/types.h"

namespace sfm {

enum class InputNorm { kGlobalMvn = 0, kUtteranceMvn = 1 };
enum class ReferenceNorm { kGlobalMinMax01 = 0, kUtteranceMvn = 1 };
enum class FeatureRole { kInput, kReference };

const char *InputNormName(InputNorm m);
const char *ReferenceNormName(ReferenceNorm m);

// Normalisation applied to network inputs and targets.
//
// global_mvn       input_mean / input_var over all training rows
// global_minmax_01 ref_min / ref_max over all training reference rows
// utterance_mvn    statistics of the utterance itself; nothing stored except,
//                  for references, ref_mean / ref_std: the average
//                  per-utterance mean and standard deviation seen in
//                  training, used to map network output back to log-Mel.
struct NormalizationSpec {
  InputNorm input_mode = InputNorm::kGlobalMvn;
  ReferenceNorm reference_mode = ReferenceNorm::kGlobalMinMax01;
  RealVector input_mean, input_var;
  RealVector ref_min, ref_max;
  RealVector ref_mean, ref_std;
  double epsilon = 1e-6;
};

// normalized = (x - offset) / scale, per column.
struct AffineStats {
  RealVector offset;
  RealVector scale;
};

// Per-column mean and population variance.
void ColumnMeanVar(const RealMatrix &x, RealVector *mean, RealVector *var);

// Streaming per-column mean / population variance over row blocks.
class MvnAccumulator {
 public:
  void Add(const RealMatrix &rows);
  size_t Count() const { return count_; }
  // Throws ConfigError when nothing was added.
  void Finish(RealVector *mean, RealVector *var) const;

 private:
  // Sums are taken around the first row seen for numerical stability.
  RealVector shift_, sum_, sum_sq_;
  size_t count_ = 0;
};

// Sets the reference fields of `spec` (min/max or averaged per-utterance
// statistics, per spec->reference_mode) from training references.
void FitReferenceStats(const std::vector<RealMatrix> &references,
                       NormalizationSpec *spec,
                       std::vector<std::string> *warnings = nullptr);

// Statistics are pooled over all rows of all matrices. Variances below
// epsilon (and zero min/max ranges) are clamped to epsilon, with a message
// appended to `warnings` when it is non-null. Throws ConfigError on an empty
// training set.
NormalizationSpec FitNormalizer(const std::vector<RealMatrix> &inputs,
                                const std::vector<RealMatrix> &references,
                                InputNorm input_mode,
                                ReferenceNorm reference_mode,
                                double epsilon = 1e-6,
                                std::vector<std::string> *warnings = nullptr);

// Statistics that Normalize would use for x in the given role: stored
// statistics for global modes, x's own for utterance_mvn.
AffineStats StatsFor(const RealMatrix &x, const NormalizationSpec &spec,
                     FeatureRole role);

RealMatrix ApplyAffine(const RealMatrix &x, const AffineStats &stats);
RealMatrix InvertAffine(const RealMatrix &y, const AffineStats &stats);

RealMatrix Normalize(const RealMatrix &x, const NormalizationSpec &spec,
                     FeatureRole role);

// Inverse of reference normalisation using the stored inversion statistics
// (min/max, or ref_mean/ref_std for utterance_mvn).
AffineStats ReferenceInversionStats(const NormalizationSpec &spec);

}  // namespace sfm

#endif  // SFMDNN_DNN_NORMALIZER_H_
