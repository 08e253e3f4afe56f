// sfmdnn/src/dnn/normalizer.cc

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

#include "sfmdnn/dnn/normalizer.h"

#include <cmath>

#include "sfmdnn/base/errors.h"

namespace sfm {

const char *InputNormName(InputNorm m) {
  return m == InputNorm::kGlobalMvn ? "global_mvn" : "utterance_mvn";
}

const char *ReferenceNormName(ReferenceNorm m) {
  return m == ReferenceNorm::kGlobalMinMax01 ? "global_minmax_01"
                                             : "utterance_mvn";
}

void ColumnMeanVar(const RealMatrix &x, RealVector *mean, RealVector *var) {
  const Eigen::Index n = x.rows();
  *mean = RealVector::Zero(x.cols());
  *var = RealVector::Zero(x.cols());
  if (n == 0) return;
  *mean = x.colwise().mean().transpose();
  for (Eigen::Index r = 0; r < n; ++r)
    *var += (x.row(r).transpose() - *mean).array().square().matrix();
  *var /= static_cast<double>(n);
}

namespace {

int ClampBelow(RealVector *v, double eps) {
  int clamped = 0;
  for (Eigen::Index i = 0; i < v->size(); ++i)
    if ((*v)[i] < eps) {
      (*v)[i] = eps;
      ++clamped;
    }
  return clamped;
}

void Warn(std::vector<std::string> *warnings, const std::string &msg) {
  if (warnings) warnings->push_back(msg);
}

AffineStats MvnStats(const RealVector &mean, RealVector var, double eps) {
  ClampBelow(&var, eps);
  return {mean, var.cwiseSqrt()};
}

}  // namespace

void MvnAccumulator::Add(const RealMatrix &rows) {
  if (rows.rows() == 0) return;
  if (count_ == 0) {
    shift_ = rows.row(0).transpose();
    sum_ = RealVector::Zero(rows.cols());
    sum_sq_ = RealVector::Zero(rows.cols());
  } else if (rows.cols() != shift_.size()) {
    throw ShapeError("mvn: row width varies between blocks");
  }
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const RealVector d = rows.row(r).transpose() - shift_;
    sum_ += d;
    sum_sq_ += d.cwiseProduct(d);
  }
  count_ += rows.rows();
}

void MvnAccumulator::Finish(RealVector *mean, RealVector *var) const {
  if (count_ == 0) throw ConfigError("mvn: no frames accumulated");
  const double n = static_cast<double>(count_);
  const RealVector m = sum_ / n;
  *var = (sum_sq_ / n - m.cwiseProduct(m)).cwiseMax(0.0);
  *mean = shift_ + m;
}

void FitReferenceStats(const std::vector<RealMatrix> &references,
                       NormalizationSpec *spec,
                       std::vector<std::string> *warnings) {
  if (references.empty()) throw ConfigError("fit_normalizer: empty training set");
  const double epsilon = spec->epsilon;
  const Eigen::Index ref_dim = references.front().cols();
  if (spec->reference_mode == ReferenceNorm::kGlobalMinMax01) {
    spec->ref_min = RealVector::Constant(ref_dim, INFINITY);
    spec->ref_max = RealVector::Constant(ref_dim, -INFINITY);
    for (const auto &m : references) {
      if (m.cols() != ref_dim)
        throw ShapeError("fit_normalizer: reference width varies");
      if (m.rows() == 0) continue;
      spec->ref_min = spec->ref_min.cwiseMin(m.colwise().minCoeff().transpose());
      spec->ref_max = spec->ref_max.cwiseMax(m.colwise().maxCoeff().transpose());
    }
    if (!spec->ref_min.allFinite())
      throw ConfigError("fit_normalizer: no reference frames");
    RealVector range = spec->ref_max - spec->ref_min;
    if (int n = ClampBelow(&range, epsilon))
      Warn(warnings, std::to_string(n) + " reference dimension(s) with zero range");
  } else {
    // Average per-utterance statistics, kept for inverting network output.
    spec->ref_mean = RealVector::Zero(ref_dim);
    spec->ref_std = RealVector::Zero(ref_dim);
    int used = 0;
    for (const auto &m : references) {
      if (m.cols() != ref_dim)
        throw ShapeError("fit_normalizer: reference width varies");
      if (m.rows() == 0) continue;
      RealVector mean, var;
      ColumnMeanVar(m, &mean, &var);
      ClampBelow(&var, epsilon);
      spec->ref_mean += mean;
      spec->ref_std += var.cwiseSqrt();
      ++used;
    }
    if (used == 0) throw ConfigError("fit_normalizer: no reference frames");
    spec->ref_mean /= used;
    spec->ref_std /= used;
  }
}

NormalizationSpec FitNormalizer(const std::vector<RealMatrix> &inputs,
                                const std::vector<RealMatrix> &references,
                                InputNorm input_mode,
                                ReferenceNorm reference_mode, double epsilon,
                                std::vector<std::string> *warnings) {
  if (inputs.empty() || references.empty())
    throw ConfigError("fit_normalizer: empty training set");
  if (!(epsilon > 0.0)) throw ConfigError("fit_normalizer: epsilon must be > 0");
  NormalizationSpec spec;
  spec.input_mode = input_mode;
  spec.reference_mode = reference_mode;
  spec.epsilon = epsilon;
  if (input_mode == InputNorm::kGlobalMvn) {
    MvnAccumulator acc;
    for (const auto &m : inputs) acc.Add(m);
    acc.Finish(&spec.input_mean, &spec.input_var);
    if (int n = ClampBelow(&spec.input_var, epsilon))
      Warn(warnings, std::to_string(n) +
                         " input dimension(s) with variance below epsilon");
  }
  FitReferenceStats(references, &spec, warnings);
  return spec;
}

AffineStats StatsFor(const RealMatrix &x, const NormalizationSpec &spec,
                     FeatureRole role) {
  if (role == FeatureRole::kInput) {
    if (spec.input_mode == InputNorm::kGlobalMvn) {
      if (spec.input_mean.size() != x.cols())
        throw ShapeError("normalize: input has " + std::to_string(x.cols()) +
                         " columns, statistics have " +
                         std::to_string(spec.input_mean.size()));
      return MvnStats(spec.input_mean, spec.input_var, spec.epsilon);
    }
  } else if (spec.reference_mode == ReferenceNorm::kGlobalMinMax01) {
    return ReferenceInversionStats(spec);
  }
  RealVector mean, var;
  ColumnMeanVar(x, &mean, &var);
  return MvnStats(mean, var, spec.epsilon);
}

RealMatrix ApplyAffine(const RealMatrix &x, const AffineStats &stats) {
  if (stats.offset.size() != x.cols() || stats.scale.size() != x.cols())
    throw ShapeError("normalize: statistics width mismatch");
  RealMatrix y = x;
  y.rowwise() -= stats.offset.transpose();
  y.array().rowwise() /= stats.scale.transpose().array();
  return y;
}

RealMatrix InvertAffine(const RealMatrix &y, const AffineStats &stats) {
  if (stats.offset.size() != y.cols() || stats.scale.size() != y.cols())
    throw ShapeError("denormalize: statistics width mismatch");
  RealMatrix x = y;
  x.array().rowwise() *= stats.scale.transpose().array();
  x.rowwise() += stats.offset.transpose();
  return x;
}

RealMatrix Normalize(const RealMatrix &x, const NormalizationSpec &spec,
                     FeatureRole role) {
  return ApplyAffine(x, StatsFor(x, spec, role));
}

AffineStats ReferenceInversionStats(const NormalizationSpec &spec) {
  if (spec.reference_mode == ReferenceNorm::kGlobalMinMax01) {
    RealVector range = spec.ref_max - spec.ref_min;
    ClampBelow(&range, spec.epsilon);
    return {spec.ref_min, range};
  }
  return {spec.ref_mean, spec.ref_std};
}

}  // namespace sfm
