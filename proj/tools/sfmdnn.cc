// sfmdnn/tools/sfmdnn.cc

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

// Command-line front end: simulate, train, enhance, evaluate, report.
//
// Every option can also come from the environment as SFMDNN_<NAME>
// (SFMDNN_CONFIG, SFMDNN_SEED, SFMDNN_JOBS, SFMDNN_MANIFEST, SFMDNN_MODEL).
// Exit status: 0 success, 1 usage or config error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/kv-config.h"
#include "sfmdnn/base/seeds.h"
#include "sfmdnn/corpus/corpus.h"
#include "sfmdnn/eval/metrics.h"
#include "sfmdnn/eval/report.h"
#include "sfmdnn/pipeline/pipeline.h"
#include "sfmdnn/pipeline/training.h"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  int jobs = 1;
};

sfm::KvConfig LoadConfig(const CommonArgs &args) {
  sfm::KvConfig kv;
  if (!args.config.empty()) kv = sfm::KvConfig::FromFile(args.config);
  for (const auto &o : args.overrides) kv.ApplyOverride(o);
  return kv;
}

void WriteText(const fs::path &path, const std::string &text) {
  sfm::WriteFileBytes(path.string(), std::vector<unsigned char>(text.begin(), text.end()));
}

void MakeOutDir(const std::string &dir) {
  if (dir.empty()) throw sfm::ConfigError("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw sfm::ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string Hex(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void FreezeSeeds(const fs::path &dir, const std::map<std::string, uint64_t> &seeds) {
  std::string text;
  for (const auto &[k, v] : seeds) text += k + "=" + std::to_string(v) + "\n";
  WriteText(dir / "seeds.txt", text);
}

void AddCommon(CLI::App *cmd, CommonArgs *args, bool want_config = true) {
  if (want_config)
    cmd->add_option("--config", args->config, "key=value config file")
        ->envname("SFMDNN_CONFIG");
  if (want_config)
    cmd->add_option("--set", args->overrides, "override a config key (k=v), repeatable");
  cmd->add_option("--out", args->out, "output directory")->required();
  cmd->add_option("--jobs", args->jobs, "utterance-level worker threads")
      ->envname("SFMDNN_JOBS")
      ->check(CLI::PositiveNumber);
}

std::optional<sfm::Split> SplitArg(const std::string &s) {
  if (s.empty() || s == "all") return std::nullopt;
  return sfm::ParseSplit(s);
}

int RunSimulate(const CommonArgs &args, const std::optional<uint64_t> &seed) {
  sfm::KvConfig kv = LoadConfig(args);
  if (seed) kv.Set("seed", std::to_string(*seed));
  kv.CheckKnown(sfm::kCorpusConfigKeys);
  const sfm::CorpusConfig cfg = sfm::CorpusConfigFromKv(kv);
  sfm::ValidateCorpusConfig(cfg);
  MakeOutDir(args.out);
  const sfm::CorpusManifest m = sfm::BuildCorpus(cfg, args.out, args.jobs);
  kv.Set("seed", std::to_string(cfg.seed));
  WriteText(fs::path(args.out) / "config.txt", kv.ToText());
  FreezeSeeds(args.out, {{"seed", cfg.seed}, {"corpus", sfm::DeriveSeed(cfg.seed, "corpus")}});
  std::printf("%s\n", (fs::path(args.out) / "manifest.json").string().c_str());
  for (sfm::Split s : {sfm::Split::kTrain, sfm::Split::kDev, sfm::Split::kTest})
    std::printf("%s %zu\n", sfm::SplitName(s), m.BySplit(s).size());
  return 0;
}

int RunTrain(const CommonArgs &args, const std::string &manifest_path,
             const std::string &recipe, const std::optional<uint64_t> &seed) {
  sfm::KvConfig kv = LoadConfig(args);
  if (!recipe.empty()) kv.Set("recipe", recipe);
  std::vector<std::string> known = sfm::kTrainConfigKeys;
  known.push_back("seed");
  kv.CheckKnown(known);
  const uint64_t model_seed = seed ? *seed : kv.GetUint64("seed", 1);
  sfm::SfmTrainOptions opts = sfm::TrainOptionsFromKv(kv, model_seed);
  opts.jobs = args.jobs;
  const sfm::CorpusManifest m = sfm::LoadManifest(manifest_path);
  MakeOutDir(args.out);
  const fs::path out(args.out);
  WriteText(out / "config.txt", sfm::TrainOptionsText(opts));
  FreezeSeeds(out, {{"seed", model_seed},
                    {"init", sfm::DeriveSeed(model_seed, "init")},
                    {"shuffle", opts.train.shuffle_seed},
                    {"dropout", opts.train.dropout_seed},
                    {"corpus", m.seed}});
  const sfm::TrainedModel trained = sfm::TrainSfmModel(m, opts);
  sfm::SaveModel(trained.model, (out / "model.sfmd").string());
  WriteText(out / "history.json", sfm::TrainHistoryToJson(trained.history));
  std::printf("%s\n", (out / "model.sfmd").string().c_str());
  std::printf("epochs %zu stop %s best_epoch %d\n", trained.history.train_cost.size(),
              sfm::StopReasonName(trained.history.stop_reason), trained.history.best_epoch);
  return 0;
}

const std::vector<std::string> kEnhanceKeys = {
    "wpe_taps", "wpe_delay", "wpe_iterations", "wpe_variance_floor",
    "wpe_regularization", "wpe_relative_regularization", "resynthesize",
    "wpe_threads"};

int RunEnhance(const CommonArgs &args, const std::string &manifest_path,
               const std::string &mode, const std::string &model_path,
               const std::string &split) {
  sfm::KvConfig kv = LoadConfig(args);
  kv.CheckKnown(kEnhanceKeys);
  sfm::PipelineConfig cfg;
  cfg.mode = sfm::ParsePipelineMode(mode);
  cfg.wpe.taps = static_cast<int>(kv.GetInt("wpe_taps", cfg.wpe.taps));
  cfg.wpe.delay = static_cast<int>(kv.GetInt("wpe_delay", cfg.wpe.delay));
  cfg.wpe.iterations = static_cast<int>(kv.GetInt("wpe_iterations", cfg.wpe.iterations));
  cfg.wpe.variance_floor = kv.GetDouble("wpe_variance_floor", cfg.wpe.variance_floor);
  cfg.wpe.regularization = kv.GetDouble("wpe_regularization", cfg.wpe.regularization);
  cfg.wpe.relative_regularization =
      kv.GetBool("wpe_relative_regularization", cfg.wpe.relative_regularization);
  cfg.resynthesize = kv.GetBool("resynthesize", cfg.resynthesize);
  cfg.wpe_threads = static_cast<int>(kv.GetInt("wpe_threads", 1));
  if (sfm::UsesDnn(cfg.mode)) {
    if (model_path.empty())
      throw sfm::ConfigError(std::string("--mode ") + mode + " requires --model");
    cfg.model = std::make_shared<const sfm::MlpModel>(sfm::LoadModel(model_path));
  }
  const sfm::CorpusManifest m = sfm::LoadManifest(manifest_path);
  cfg.features = m.features;
  sfm::ValidatePipelineConfig(cfg);
  MakeOutDir(args.out);
  const fs::path out(args.out);
  WriteText(out / "config.txt", sfm::PipelineConfigText(cfg));
  std::map<std::string, uint64_t> seeds = {{"corpus", m.seed}};
  if (cfg.model) seeds["model"] = cfg.model->seed;
  FreezeSeeds(out, seeds);
  const sfm::BatchSummary s =
      sfm::BatchEnhance(m, SplitArg(split), cfg, args.out, args.jobs);
  std::printf("%s: %d ok, %d failed, config %s\n", mode.c_str(), s.succeeded, s.failed,
              s.config_hash.c_str());
  return s.failed ? 2 : 0;
}

int RunEvaluate(const std::string &manifest_path, const std::string &system_dir,
                const std::string &name, const std::string &split,
                const std::string &out_path, int jobs) {
  const sfm::CorpusManifest m = sfm::LoadManifest(manifest_path);
  std::string sys_name = name;
  if (sys_name.empty())
    sys_name = sfm::KvConfig::FromFile((fs::path(system_dir) / "pipeline.txt").string())
                   .GetString("mode", "system");
  const sfm::SystemMetrics metrics =
      sfm::EvaluateSystem(m, SplitArg(split), system_dir, sys_name, jobs);
  const std::string path =
      out_path.empty() ? (fs::path(system_dir) / "metrics.json").string() : out_path;
  sfm::SaveSystemMetrics(metrics, path);
  std::printf("%s\n", path.c_str());
  return 0;
}

int RunReport(const std::vector<std::string> &systems, const std::string &out) {
  std::vector<sfm::SystemMetrics> loaded;
  std::string listing;
  for (const auto &spec : systems) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw sfm::ConfigError("--system expects name=path, got '" + spec + "'");
    const std::string name = spec.substr(0, eq);
    fs::path path = spec.substr(eq + 1);
    if (fs::is_directory(path)) path /= "metrics.json";
    sfm::SystemMetrics m = sfm::LoadSystemMetrics(path.string());
    m.system = name;
    loaded.push_back(std::move(m));
    listing += name + "=" + path.string() + "\n";
  }
  const sfm::ComparisonReport r = sfm::BuildReport(loaded);
  MakeOutDir(out);
  sfm::WriteReport(r, out);
  WriteText(fs::path(out) / "config.txt", listing);
  std::printf("%s\n", (fs::path(out) / "report.json").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Cascaded WPE and spectral feature mapping enhancement"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off")
      ->envname("SFMDNN_LOG_LEVEL");

  CommonArgs sim_args, train_args, enh_args;
  std::optional<uint64_t> seed;
  std::string manifest, recipe, mode, model, split, system_dir, name, eval_out;
  int eval_jobs = 1;
  std::vector<std::string> systems;
  std::string report_out;

  auto *sim = app.add_subcommand("simulate", "generate a synthetic corpus");
  AddCommon(sim, &sim_args);
  sim->add_option("--seed", seed, "master seed")->envname("SFMDNN_SEED");

  auto *train = app.add_subcommand("train", "train a spectral feature mapping network");
  AddCommon(train, &train_args);
  train->add_option("--seed", seed, "master seed")->envname("SFMDNN_SEED");
  train->add_option("--manifest", manifest, "corpus manifest.json")
      ->required()
      ->envname("SFMDNN_MANIFEST");
  train->add_option("--recipe", recipe, "original or enhanced")
      ->check(CLI::IsMember({"original", "enhanced"}));

  auto *enh = app.add_subcommand("enhance", "run a pipeline mode over a corpus split");
  AddCommon(enh, &enh_args);
  enh->add_option("--manifest", manifest, "corpus manifest.json")
      ->required()
      ->envname("SFMDNN_MANIFEST");
  enh->add_option("--mode", mode, "baseline, wpe_only, dnn_only or wpe_dnn")
      ->required()
      ->check(CLI::IsMember({"baseline", "wpe_only", "dnn_only", "wpe_dnn"}));
  enh->add_option("--model", model, "checkpoint for dnn modes")->envname("SFMDNN_MODEL");
  enh->add_option("--split", split, "train, dev, test or all")->default_val("test");

  auto *ev = app.add_subcommand("evaluate", "score an enhance output directory");
  ev->add_option("--manifest", manifest, "corpus manifest.json")
      ->required()
      ->envname("SFMDNN_MANIFEST");
  ev->add_option("--system-dir", system_dir, "output of enhance")->required();
  ev->add_option("--name", name, "system name (default: the pipeline mode)");
  ev->add_option("--split", split, "train, dev, test or all")->default_val("test");
  ev->add_option("--out", eval_out, "metrics file (default <system-dir>/metrics.json)");
  ev->add_option("--jobs", eval_jobs, "worker threads")
      ->envname("SFMDNN_JOBS")
      ->check(CLI::PositiveNumber);

  auto *rep = app.add_subcommand("report", "compare evaluated systems against baseline");
  rep->add_option("--system,--systems", systems,
                  "name=metrics.json or name=dir, repeatable; one must be 'baseline'")
      ->required();
  rep->add_option("--out", report_out, "report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  spdlog::set_level(spdlog::level::from_str(log_level));
  spdlog::set_pattern("%^%l%$: %v");
  try {
    if (*sim) return RunSimulate(sim_args, seed);
    if (*train) return RunTrain(train_args, manifest, recipe, seed);
    if (*enh) return RunEnhance(enh_args, manifest, mode, model, split);
    if (*ev) return RunEvaluate(manifest, system_dir, name, split, eval_out, eval_jobs);
    if (*rep) return RunReport(systems, report_out);
  } catch (const sfm::ConfigError &e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 1;
}
