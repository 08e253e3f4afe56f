// sfmdnn/tests/cli-test.cc

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

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "oracles.h"
#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/corpus/corpus.h"
#include "sfmdnn/dnn/model.h"
#include "sfmdnn/pipeline/training.h"

using namespace sfm;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status;
  std::string output;
};

RunResult Run(const std::string &args) {
  const std::string cmd = std::string(SFMDNN_CLI) + " --log-level warn " + args + " 2>&1";
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string ReadText(const std::string &path) {
  const auto bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

const char *kTiny =
    " --set train_utterances=4 --set dev_utterances=2 --set test_utterances=1"
    " --set min_duration=1 --set max_duration=1.5 --set rir_seconds=0.3";

// Corpus, model and baseline/wpe outputs shared by several cases.
struct Workspace {
  oracle::TempDir dir{"cli"};
  Workspace() {
    REQUIRE(Run("simulate --seed 5 --out " + dir / "corpus" + kTiny).status == 0);
    const std::string train = "train --seed 5 --manifest " + dir / "corpus/manifest.json" +
                              " --recipe enhanced --set hidden_units=16,16 --set max_epochs=6"
                              " --out " + dir / "model";
    const RunResult r = Run(train);
    INFO(r.output);
    REQUIRE(r.status == 0);
  }
  std::string Manifest() const { return dir / "corpus/manifest.json"; }
};

Workspace &Shared() {
  static Workspace w;
  return w;
}

}  // namespace

TEST_CASE("simulate") {
  oracle::TempDir dir("cli-sim");
  const RunResult a = Run("simulate --seed 11 --out " + dir / "a" + kTiny);
  REQUIRE(a.status == 0);
  const CorpusManifest m = LoadManifest(dir / "a/manifest.json");
  std::set<double> snrs;
  for (const auto *r : m.BySplit(Split::kTest)) snrs.insert(r->snr_db);
  CHECK(snrs == std::set<double>{-6, -3, 0, 3, 6, 9});
  CHECK(fs::exists(dir / "a/config.txt"));
  CHECK(ReadText(dir / "a/seeds.txt").find("11") != std::string::npos);

  REQUIRE(Run("simulate --seed 11 --out " + dir / "b" + kTiny).status == 0);
  for (const auto &e : fs::recursive_directory_iterator(dir.path() / "a")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir.path() / "a").string();
    CHECK(ReadFileBytes(e.path().string()) == ReadFileBytes(dir / ("b/" + rel)));
  }

  const RunResult bad = Run("simulate --out " + dir / "c" + " --set t60=0");
  CHECK(bad.status == 1);
  CHECK(bad.output.find("t60") != std::string::npos);
  CHECK(Run("simulate --out " + dir / "d" + " --set no_such_key=1").status == 1);
  CHECK(Run("simulate --out " + dir / "e" + " --config " + dir / "missing.txt").status == 1);
  CHECK(Run("simulate").status == 1);
  CHECK(Run("frobnicate").status == 1);
}

TEST_CASE("train") {
  Workspace &w = Shared();
  const MlpModel model = LoadModel(w.dir / "model/model.sfmd");
  CHECK(model.net.dims == std::vector<int>{2827, 16, 16, 40});
  const TrainHistory h = TrainHistoryFromJson(ReadText(w.dir / "model/history.json"));
  // Replay the stop rules over the logged dev costs.
  const auto want = oracle::EarlyStop(h.dev_cost, 0.01, 0.001);
  if (want.epochs < 6 || want.reason != "max_epochs") {
    CHECK(static_cast<int>(h.dev_cost.size()) == want.epochs);
    CHECK(std::string(StopReasonName(h.stop_reason)) == want.reason);
    CHECK(h.best_epoch == want.kept);
  } else {
    CHECK(h.stop_reason == StopReason::kMaxEpochs);
    CHECK(h.best_epoch == 6);
  }
  CHECK(ReadText(w.dir / "model/config.txt").find("recipe=enhanced") != std::string::npos);
  CHECK(fs::exists(w.dir / "model/seeds.txt"));

  // No dev split with the enhanced recipe.
  oracle::TempDir dir("cli-nodev");
  REQUIRE(Run("simulate --out " + dir / "c" + kTiny + " --set dev_utterances=0").status == 0);
  const RunResult r = Run("train --manifest " + dir / "c/manifest.json" + " --recipe enhanced --out " + dir / "m");
  CHECK(r.status == 1);
  CHECK(r.output.find("cross-validation") != std::string::npos);
  CHECK(Run("train --manifest " + w.Manifest() + " --recipe fancy --out " + dir / "m2").status == 1);
}

TEST_CASE("enhance, evaluate and report") {
  Workspace &w = Shared();
  const std::string m = " --manifest " + w.Manifest();
  const std::string model = " --model " + w.dir / "model/model.sfmd";
  REQUIRE(Run("enhance" + m + " --mode baseline --out " + w.dir / "baseline").status == 0);
  REQUIRE(Run("enhance" + m + " --mode wpe_only --out " + w.dir / "wpe_only").status == 0);
  REQUIRE(Run("enhance" + m + model + " --mode dnn_only --out " + w.dir / "dnn_only").status == 0);
  REQUIRE(Run("enhance" + m + model + " --mode wpe_dnn --out " + w.dir / "wpe_dnn").status == 0);
  CHECK(Run("enhance" + m + " --mode wpe_dnn --out " + w.dir / "nomodel").status != 0);
  CHECK(Run("enhance" + m + " --mode sideways --out " + w.dir / "x").status == 1);

  REQUIRE(Run("enhance" + m + " --mode wpe_only --out " + w.dir / "again").status == 0);
  for (const auto &e : fs::directory_iterator(w.dir.path() / "wpe_only/features"))
    CHECK(ReadFileBytes(e.path().string()) ==
          ReadFileBytes(w.dir / ("again/features/" + e.path().filename().string())));
  CHECK(ReadText(w.dir / "wpe_dnn/config.txt").find("mode=wpe_dnn") != std::string::npos);

  std::string systems;
  for (const char *s : {"baseline", "wpe_only", "dnn_only", "wpe_dnn"}) {
    const RunResult r = Run("evaluate" + m + " --system-dir " + w.dir / s);
    INFO(r.output);
    REQUIRE(r.status == 0);
    systems += std::string(" --system ") + s + "=" + w.dir / s;
  }
  const RunResult rep = Run("report" + systems + " --out " + w.dir / "report");
  INFO(rep.output);
  REQUIRE(rep.status == 0);
  const std::string csv = ReadText(w.dir / "report/mel_mse.csv");
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "condition,count,baseline,wpe_only,dnn_only,wpe_dnn");
  CHECK(lines[7].rfind("Avg.,", 0) == 0);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::stringstream ls(lines[i]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 6);
    for (size_t c = 2; c < 6; ++c) CHECK(std::isfinite(std::stod(cells[c])));
  }

  const RunResult single = Run("report --system baseline=" + w.dir / "baseline" + " --out " + w.dir / "r1");
  CHECK(single.status == 1);
  CHECK(single.output.find("baseline") != std::string::npos);
  CHECK(Run("report --system a=" + w.dir / "wpe_only" + " --system b=" + w.dir / "dnn_only" +
            " --out " + w.dir / "r2").status == 1);
}
