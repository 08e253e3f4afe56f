// sfmdnn/src/eval/report.cc

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

#include "sfmdnn/eval/report.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/kv-config.h"

namespace sfm {

namespace fs = std::filesystem;

const char *const kAverageRow = "Avg.";

namespace {

// Conditions sort by SNR; noise-free utterances form their own condition.
struct ConditionKey {
  bool has_noise;
  double snr_db;
  bool operator<(const ConditionKey &o) const {
    if (has_noise != o.has_noise) return has_noise;
    return has_noise && snr_db < o.snr_db;
  }
};

ConditionKey KeyOf(const UtteranceMetrics &u) {
  return {u.has_noise, u.has_noise ? u.snr_db : 0.0};
}

std::string Label(const ConditionKey &k) {
  return k.has_noise ? FormatDouble(k.snr_db) : "no_noise";
}

enum class MetricId { kMelMse, kLsd, kSegSnrGain };

std::optional<double> Get(const UtteranceMetrics &u, MetricId id) {
  switch (id) {
    case MetricId::kMelMse:
      return u.mel_mse;
    case MetricId::kLsd:
      return u.lsd;
    case MetricId::kSegSnrGain:
      return u.segsnr_gain;
  }
  return std::nullopt;
}

std::optional<double> Reduction(const std::optional<double> &base, double sys) {
  if (!base || *base == 0.0) return std::nullopt;
  return (*base - sys) / *base;
}

}  // namespace

ComparisonReport BuildReport(const std::vector<SystemMetrics> &systems) {
  if (systems.size() < 2)
    throw ConfigError("report: need at least two systems including 'baseline'");
  std::vector<const SystemMetrics *> ordered;
  for (const auto &s : systems)
    if (s.system == "baseline") ordered.push_back(&s);
  if (ordered.size() != 1)
    throw ConfigError("report: exactly one system must be named 'baseline'");
  std::set<std::string> names;
  for (const auto &s : systems) {
    if (!names.insert(s.system).second)
      throw ConfigError("report: duplicate system name '" + s.system + "'");
    if (s.system != "baseline") ordered.push_back(&s);
  }

  // Condition of every utterance, as seen by the baseline.
  std::map<std::string, ConditionKey> utt_condition;
  for (const auto &u : ordered[0]->utterances)
    if (!utt_condition.emplace(u.id, KeyOf(u)).second)
      throw ManifestError("report: baseline lists '" + u.id + "' twice");
  if (utt_condition.empty()) throw ConfigError("report: baseline has no utterances");
  for (const auto *s : ordered) {
    std::set<std::string> seen;
    for (const auto &u : s->utterances) {
      auto it = utt_condition.find(u.id);
      if (it == utt_condition.end())
        throw ManifestError("report: '" + s->system + "' has utterance '" + u.id +
                            "' missing from baseline");
      const ConditionKey k = KeyOf(u);
      if (k < it->second || it->second < k)
        throw ManifestError("report: '" + s->system + "' disagrees on the condition of '" +
                            u.id + "'");
      if (!seen.insert(u.id).second)
        throw ManifestError("report: '" + s->system + "' lists '" + u.id + "' twice");
    }
    if (seen.size() != utt_condition.size())
      throw ManifestError("report: '" + s->system + "' was evaluated on " +
                          std::to_string(seen.size()) + " utterances, baseline on " +
                          std::to_string(utt_condition.size()));
  }

  std::map<ConditionKey, int> cond_count;
  for (const auto &[id, k] : utt_condition) ++cond_count[k];

  ComparisonReport r;
  for (const auto *s : ordered) r.systems.push_back(s->system);
  std::vector<ConditionKey> conds;
  for (const auto &[k, n] : cond_count) {
    conds.push_back(k);
    r.rows.push_back(Label(k));
    r.snr_db.push_back(k.has_noise ? std::optional<double>(k.snr_db) : std::nullopt);
    r.counts.push_back(n);
  }
  r.rows.push_back(kAverageRow);
  const size_t n_cond = conds.size();

  const std::pair<const char *, MetricId> metrics[] = {
      {"mel_mse", MetricId::kMelMse},
      {"lsd_db", MetricId::kLsd},
      {"segsnr_gain_db", MetricId::kSegSnrGain}};
  for (const auto &[metric_name, id] : metrics) {
    MetricTable t;
    t.metric = metric_name;
    for (const auto *s : ordered) {
      std::map<ConditionKey, std::pair<double, int>> acc;
      bool complete = true;
      for (const auto &u : s->utterances) {
        const auto v = Get(u, id);
        if (!v) {
          complete = false;
          break;
        }
        auto &a = acc[KeyOf(u)];
        a.first += *v;
        a.second += 1;
      }
      if (!complete) {
        t.values.push_back(std::nullopt);
        continue;
      }
      std::vector<double> row;
      double avg = 0.0;
      for (const auto &k : conds) {
        const auto &a = acc.at(k);
        row.push_back(a.first / a.second);
        avg += row.back();
      }
      row.push_back(avg / static_cast<double>(n_cond));
      t.values.push_back(std::move(row));
    }
    // A gain is already relative to the degraded input; a ratio against the
    // baseline's (zero) gain is meaningless.
    if (id != MetricId::kSegSnrGain) {
      const auto &base = t.values[0];
      for (size_t s = 0; s < ordered.size(); ++s) {
        const auto &vals = t.values[s];
        if (!base || !vals) {
          t.reduction.push_back(std::nullopt);
          t.mean_of_reductions.push_back(std::nullopt);
          continue;
        }
        std::vector<double> red;
        double sum = 0.0;
        bool ok = true;
        for (size_t c = 0; c <= n_cond; ++c) {
          const auto v = Reduction((*base)[c], (*vals)[c]);
          if (!v) {
            ok = false;
            break;
          }
          red.push_back(*v);
          if (c < n_cond) sum += *v;
        }
        if (!ok) {
          t.reduction.push_back(std::nullopt);
          t.mean_of_reductions.push_back(std::nullopt);
          continue;
        }
        t.reduction.push_back(std::move(red));
        t.mean_of_reductions.push_back(sum / static_cast<double>(n_cond));
      }
    }
    r.tables.push_back(std::move(t));
  }
  return r;
}

namespace {

nlohmann::json Series(const std::optional<std::vector<double>> &v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string Cell(const std::optional<std::vector<double>> &v, size_t i) {
  return v ? FormatDouble((*v)[i]) : std::string();
}

}  // namespace

std::string ReportToJson(const ComparisonReport &r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["systems"] = r.systems;
  j["rows"] = r.rows;
  nlohmann::json snr = nlohmann::json::array();
  for (const auto &s : r.snr_db) snr.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
  j["snr_db"] = std::move(snr);
  j["counts"] = r.counts;
  j["average_rule"] = "unweighted mean of condition means";
  j["reduction_rule"] = "(baseline - system) / baseline on condition means";
  nlohmann::json metrics;
  for (const auto &t : r.tables) {
    nlohmann::json m;
    for (size_t s = 0; s < r.systems.size(); ++s) {
      nlohmann::json sys;
      sys["mean"] = Series(t.values[s]);
      if (!t.reduction.empty()) {
        sys["reduction"] = Series(t.reduction[s]);
        sys["mean_of_reductions"] = t.mean_of_reductions[s]
                                        ? nlohmann::json(*t.mean_of_reductions[s])
                                        : nlohmann::json(nullptr);
      }
      m[r.systems[s]] = std::move(sys);
    }
    metrics[t.metric] = std::move(m);
  }
  j["metrics"] = std::move(metrics);
  return j.dump(2) + "\n";
}

std::string MetricTableCsv(const ComparisonReport &r, const MetricTable &t) {
  std::ostringstream out;
  out << "condition,count";
  for (const auto &s : r.systems) out << "," << s;
  out << "\n";
  for (size_t i = 0; i < r.rows.size(); ++i) {
    out << r.rows[i] << ",";
    if (i < r.counts.size()) out << r.counts[i];
    for (size_t s = 0; s < r.systems.size(); ++s) out << "," << Cell(t.values[s], i);
    out << "\n";
  }
  return out.str();
}

std::string ReductionCsv(const ComparisonReport &r, const MetricTable &t) {
  std::ostringstream out;
  out << "condition";
  for (size_t s = 1; s < r.systems.size(); ++s) out << "," << r.systems[s];
  out << "\n";
  if (t.reduction.empty()) return out.str();
  for (size_t i = 0; i < r.rows.size(); ++i) {
    out << r.rows[i];
    for (size_t s = 1; s < r.systems.size(); ++s) out << "," << Cell(t.reduction[s], i);
    out << "\n";
  }
  out << "mean_of_reductions";
  for (size_t s = 1; s < r.systems.size(); ++s) {
    out << ",";
    if (t.mean_of_reductions[s]) out << FormatDouble(*t.mean_of_reductions[s]);
  }
  out << "\n";
  return out.str();
}

std::string PlotData(const ComparisonReport &r, const MetricTable &t, size_t system) {
  std::ostringstream out;
  if (!t.values.at(system)) return out.str();
  for (size_t c = 0; c < r.snr_db.size(); ++c)
    if (r.snr_db[c])
      out << FormatDouble(*r.snr_db[c]) << " " << FormatDouble((*t.values[system])[c])
          << "\n";
  return out.str();
}

namespace {

void WriteText(const fs::path &path, const std::string &text) {
  WriteFileBytes(path.string(), std::vector<unsigned char>(text.begin(), text.end()));
}

}  // namespace

void WriteReport(const ComparisonReport &r, const std::string &out_dir) {
  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root / "plot", ec);
  if (ec) throw IoError("cannot create '" + (root / "plot").string() + "': " + ec.message());
  WriteText(root / "report.json", ReportToJson(r));
  for (const auto &t : r.tables) {
    WriteText(root / (t.metric + ".csv"), MetricTableCsv(r, t));
    if (!t.reduction.empty())
      WriteText(root / (t.metric + "_reduction.csv"), ReductionCsv(r, t));
    for (size_t s = 0; s < r.systems.size(); ++s)
      if (t.values[s])
        WriteText(root / "plot" / (t.metric + "_" + r.systems[s] + ".txt"),
                  PlotData(r, t, s));
  }
}

}  // namespace sfm
