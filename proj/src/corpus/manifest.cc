// sfmdnn/src/corpus/manifest.cc

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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sfmdnn/base/errors.h"
#include "sfmdnn/corpus/corpus.h"

namespace sfm {

using nlohmann::json;

const char *SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

Split ParseSplit(const std::string &name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw ConfigError("unknown split '" + name + "'");
}

std::vector<const MixRecipe *> CorpusManifest::BySplit(Split s) const {
  std::vector<const MixRecipe *> out;
  for (const auto &r : recipes)
    if (r.split == s) out.push_back(&r);
  return out;
}

std::string CorpusManifest::Resolve(const std::string &relative) const {
  if (relative.empty()) return relative;
  return (std::filesystem::path(base_dir) / relative).string();
}

std::string ManifestToJson(const CorpusManifest &m) {
  json doc;
  doc["schema_version"] = m.schema_version;
  doc["seed"] = m.seed;
  doc["sample_rate"] = m.sample_rate;
  KvConfig fkv;
  FeatureConfigToKv(m.features, &fkv);
  json features = json::object();
  for (const auto &[k, v] : fkv.Values()) features[k] = v;
  doc["features"] = features;
  json recipes = json::array();
  for (const auto &r : m.recipes) {
    json j;
    j["id"] = r.id;
    j["split"] = SplitName(r.split);
    j["clean_id"] = r.clean_id;
    j["rir_id"] = r.rir_id ? json(*r.rir_id) : json(nullptr);
    j["noise_id"] = r.has_noise ? json(r.noise_id) : json(nullptr);
    j["snr_db"] = r.has_noise ? json(r.snr_db) : json(nullptr);
    j["t60"] = r.t60;
    json paths;
    paths["clean"] = r.clean_path;
    paths["rir"] = r.rir_path;
    paths["reverberant"] = r.reverberant_path;
    paths["noise"] = r.noise_path;
    paths["noisy"] = r.noisy_path;
    paths["reference"] = r.reference_path;
    j["paths"] = paths;
    recipes.push_back(std::move(j));
  }
  doc["recipes"] = recipes;
  return doc.dump(2) + "\n";
}

CorpusManifest ManifestFromJson(const std::string &text,
                                const std::string &base_dir) {
  CorpusManifest m;
  m.base_dir = base_dir;
  try {
    const json doc = json::parse(text);
    m.schema_version = doc.at("schema_version").get<int>();
    if (m.schema_version != 1)
      throw ManifestError("manifest: unsupported schema_version " +
                          std::to_string(m.schema_version));
    m.seed = doc.at("seed").get<uint64_t>();
    m.sample_rate = doc.at("sample_rate").get<int>();
    KvConfig fkv;
    for (const auto &[k, v] : doc.at("features").items())
      fkv.Set(k, v.get<std::string>());
    m.features = FeatureConfigFromKv(fkv, m.sample_rate);
    std::set<std::string> ids;
    std::map<std::string, Split> clean_split;
    for (const auto &j : doc.at("recipes")) {
      MixRecipe r;
      r.id = j.at("id").get<std::string>();
      r.split = ParseSplit(j.at("split").get<std::string>());
      r.clean_id = j.at("clean_id").get<std::string>();
      if (!j.at("rir_id").is_null()) r.rir_id = j.at("rir_id").get<std::string>();
      r.has_noise = !j.at("noise_id").is_null();
      if (r.has_noise) {
        r.noise_id = j.at("noise_id").get<std::string>();
        r.snr_db = j.at("snr_db").get<double>();
      }
      r.t60 = j.at("t60").get<double>();
      const json &p = j.at("paths");
      r.clean_path = p.at("clean").get<std::string>();
      r.rir_path = p.at("rir").get<std::string>();
      r.reverberant_path = p.at("reverberant").get<std::string>();
      r.noise_path = p.at("noise").get<std::string>();
      r.noisy_path = p.at("noisy").get<std::string>();
      r.reference_path = p.at("reference").get<std::string>();
      if (!ids.insert(r.id).second)
        throw ManifestError("manifest: duplicate recipe id '" + r.id + "'");
      auto [it, inserted] = clean_split.emplace(r.clean_id, r.split);
      if (!inserted && it->second != r.split)
        throw ManifestError("manifest: clean utterance '" + r.clean_id +
                            "' appears in more than one split");
      m.recipes.push_back(std::move(r));
    }
  } catch (const json::exception &e) {
    throw ManifestError(std::string("manifest: ") + e.what());
  }
  return m;
}

void SaveManifest(const CorpusManifest &m, const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest '" + path + "'");
  out << ManifestToJson(m);
}

CorpusManifest LoadManifest(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ManifestFromJson(ss.str(),
                          std::filesystem::path(path).parent_path().string());
}

}  // namespace sfm
