// sfmdnn/include/sfmdnn/eval/report.h

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

#ifndef SFMDNN_EVAL_REPORT_H_
#define SFMDNN_EVAL_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "sfmdnn/eval/metrics.h"

namespace sfm {

// One metric across systems and conditions. Rows are the conditions in
// ascending SNR order (a noise-free condition last) followed by "Avg.",
// the unweighted mean of the condition means.
struct MetricTable {
  std::string metric;
  std::vector<std::optional<std::vector<double>>> values;  // [system][row]
  // (baseline - system) / baseline per row; the Avg. entry is computed from
  // the Avg. means. Empty for metrics without a meaningful ratio.
  std::vector<std::optional<std::vector<double>>> reduction;
  // Mean over conditions of the per-condition reductions, per system.
  std::vector<std::optional<double>> mean_of_reductions;
};

struct ComparisonReport {
  std::vector<std::string> systems;    // baseline first
  std::vector<std::string> rows;       // condition labels then "Avg."
  std::vector<std::optional<double>> snr_db;  // per condition, empty if no noise
  std::vector<int> counts;             // utterances per condition
  std::vector<MetricTable> tables;     // mel_mse, lsd, segsnr_gain
};

extern const char *const kAverageRow;

// Throws ConfigError unless there are >= 2 systems and one is named
// "baseline"; throws ManifestError when the systems were evaluated on
// different utterance sets or disagree on an utterance's condition.
ComparisonReport BuildReport(const std::vector<SystemMetrics> &systems);

std::string ReportToJson(const ComparisonReport &r);
// condition,<system>... with one row per condition plus Avg.
std::string MetricTableCsv(const ComparisonReport &r, const MetricTable &t);
std::string ReductionCsv(const ComparisonReport &r, const MetricTable &t);
// "snr value" lines for one system, conditions with an SNR only.
std::string PlotData(const ComparisonReport &r, const MetricTable &t,
                     size_t system);

// Writes report.json, <metric>.csv, <metric>_reduction.csv and
// plot/<metric>_<system>.txt under out_dir.
void WriteReport(const ComparisonReport &r, const std::string &out_dir);

}  // namespace sfm

#endif  // SFMDNN_EVAL_REPORT_H_
