// sfmdnn/src/base/kv-config.cc

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

#include "sfmdnn/base/kv-config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "sfmdnn/base/errors.h"

namespace sfm {

namespace {

std::string_view Trim(std::string_view s) {
  const char *ws = " \t\r\n";
  size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCommas(std::string_view s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t pos = s.find(',', start);
    if (pos == std::string_view::npos) pos = s.size();
    std::string_view item = Trim(s.substr(start, pos - start));
    if (!item.empty()) out.emplace_back(item);
    start = pos + 1;
  }
  return out;
}

double ParseDouble(const std::string &key, const std::string &v) {
  try {
    size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception &) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      v + "'");
  }
}

}  // namespace

KvConfig KvConfig::FromFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return FromText(ss.str());
}

KvConfig KvConfig::FromText(std::string_view text) {
  KvConfig cfg;
  size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = Trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    if (line.find('=') == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    cfg.ApplyOverride(line);
  }
  return cfg;
}

void KvConfig::ApplyOverride(std::string_view assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("override '" + std::string(assignment) +
                      "' is not of the form key=value");
  std::string key(Trim(assignment.substr(0, eq)));
  if (key.empty())
    throw ConfigError("override '" + std::string(assignment) +
                      "' has an empty key");
  values_[key] = std::string(Trim(assignment.substr(eq + 1)));
}

void KvConfig::Merge(const KvConfig &other) {
  for (const auto &[k, v] : other.values_) values_[k] = v;
}

std::string KvConfig::GetString(const std::string &key,
                                const std::string &def) const {
  auto it = values_.find(key);
  return it == values_.end() ? def : it->second;
}

double KvConfig::GetDouble(const std::string &key, double def) const {
  auto it = values_.find(key);
  return it == values_.end() ? def : ParseDouble(key, it->second);
}

long long KvConfig::GetInt(const std::string &key, long long def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  long long v = 0;
  const std::string &s = it->second;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      s + "'");
  return v;
}

uint64_t KvConfig::GetUint64(const std::string &key, uint64_t def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  uint64_t v = 0;
  const std::string &s = it->second;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("config key '" + key +
                      "': expected an unsigned integer, got '" + s + "'");
  return v;
}

bool KvConfig::GetBool(const std::string &key, bool def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" +
                    it->second + "'");
}

std::vector<double> KvConfig::GetDoubleList(
    const std::string &key, const std::vector<double> &def) const {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  std::vector<double> out;
  for (const auto &item : SplitCommas(it->second))
    out.push_back(ParseDouble(key, item));
  return out;
}

std::vector<std::string> KvConfig::GetStringList(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return {};
  return SplitCommas(it->second);
}

void KvConfig::CheckKnown(const std::vector<std::string> &known) const {
  for (const auto &[k, v] : values_) {
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ConfigError("unknown config key '" + k + "'");
  }
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

std::string KvConfig::ToText() const {
  std::string out;
  for (const auto &[k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace sfm
