// sfmdnn/include/sfmdnn/base/kv-config.h

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

#ifndef SFMDNN_BASE_KV_CONFIG_H_
#define SFMDNN_BASE_KV_CONFIG_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sfm {

// Flat key=value configuration. Lines starting with '#' and blank lines are
// ignored; whitespace around keys and values is trimmed. Later assignments
// (including overrides) replace earlier ones.
class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig FromFile(const std::string &path);
  static KvConfig FromText(std::string_view text);

  // "key=value"; throws ConfigError when there is no '='.
  void ApplyOverride(std::string_view assignment);
  void Set(const std::string &key, const std::string &value) {
    values_[key] = value;
  }
  void Merge(const KvConfig &other);

  bool Has(const std::string &key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string> &Values() const { return values_; }

  std::string GetString(const std::string &key, const std::string &def) const;
  double GetDouble(const std::string &key, double def) const;
  long long GetInt(const std::string &key, long long def) const;
  uint64_t GetUint64(const std::string &key, uint64_t def) const;
  bool GetBool(const std::string &key, bool def) const;
  std::vector<double> GetDoubleList(const std::string &key,
                                    const std::vector<double> &def) const;
  std::vector<std::string> GetStringList(const std::string &key) const;

  // Throws ConfigError naming the first key not in `known`.
  void CheckKnown(const std::vector<std::string> &known) const;

  // Canonical text: sorted "key=value\n" lines. Hash input for run logs.
  std::string ToText() const;

 private:
  std::map<std::string, std::string> values_;
};

// Shortest text that parses back to the same double.
std::string FormatDouble(double v);

}  // namespace sfm

#endif  // SFMDNN_BASE_KV_CONFIG_H_
