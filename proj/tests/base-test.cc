// sfmdnn/tests/base-test.cc

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

#include <atomic>
#include <fstream>
#include <set>
#include <stdexcept>

#include "oracles.h"
#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/kv-config.h"
#include "sfmdnn/base/parallel.h"
#include "sfmdnn/base/seeds.h"

using namespace sfm;

TEST_CASE("kv config parses, overrides and rejects junk") {
  KvConfig kv = KvConfig::FromText("# comment\n a = 1 \nb=x,y\n\nlist=1, 2.5,-3\n");
  CHECK(kv.GetInt("a", 0) == 1);
  CHECK(kv.GetStringList("b") == std::vector<std::string>{"x", "y"});
  CHECK(kv.GetDoubleList("list", {}) == std::vector<double>{1.0, 2.5, -3.0});
  CHECK(kv.GetDouble("missing", 4.5) == 4.5);
  kv.ApplyOverride("a=7");
  CHECK(kv.GetInt("a", 0) == 7);
  CHECK_THROWS_AS(kv.ApplyOverride("novalue"), ConfigError);
  CHECK_THROWS_AS(KvConfig::FromText("a=1\njunk line\n"), ConfigError);
  CHECK_THROWS_AS(kv.GetInt("b", 0), ConfigError);
  CHECK_THROWS_AS(kv.CheckKnown({"a", "b"}), ConfigError);
  CHECK_NOTHROW(kv.CheckKnown({"a", "b", "list"}));
}

TEST_CASE("kv config bools and text round trip") {
  KvConfig kv = KvConfig::FromText("t=true\nf=0\nx=maybe\n");
  CHECK(kv.GetBool("t", false));
  CHECK_FALSE(kv.GetBool("f", true));
  CHECK_THROWS_AS(kv.GetBool("x", true), ConfigError);
  KvConfig again = KvConfig::FromText(kv.ToText());
  CHECK(again.Values() == kv.Values());
}

TEST_CASE("FormatDouble round-trips exactly") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.Gaussian() * std::pow(10.0, rng.Uniform(-30, 30));
    CHECK(std::stod(FormatDouble(v)) == v);
  }
  CHECK(FormatDouble(0.01) == "0.01");
}

TEST_CASE("seed derivation is stable and purpose-specific") {
  CHECK(DeriveSeed(1, "init") == DeriveSeed(1, "init"));
  CHECK(DeriveSeed(1, "init") != DeriveSeed(1, "shuffle"));
  CHECK(DeriveSeed(1, "init") != DeriveSeed(2, "init"));
  // FNV-1a 64 reference values.
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("rng streams are reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.NextU64() == b.NextU64());
  Rng r(3);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = r.Uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.Below(7) < 7);
    const double g = r.Gaussian();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sq / n - 1.0) < 0.05);
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7};
  r.Shuffle(&v);
  CHECK(std::set<int>(v.begin(), v.end()).size() == 8);
}

TEST_CASE("byte reader and writer are little-endian and bounds-checked") {
  ByteWriter w;
  w.PutBytes("AB");
  w.PutU16(0x0102);
  w.PutU32(0x03040506);
  w.PutF32(1.5f);
  w.PutF64(-2.25);
  const auto &buf = w.Buffer();
  CHECK(buf[2] == 0x02);
  CHECK(buf[3] == 0x01);
  CHECK(buf[4] == 0x06);
  ByteReader r(buf.data(), buf.size(), "test");
  CHECK(r.GetBytes(2) == "AB");
  CHECK(r.GetU16() == 0x0102);
  CHECK(r.GetU32() == 0x03040506u);
  CHECK(r.GetF32() == 1.5f);
  CHECK(r.GetF64() == -2.25);
  CHECK(r.Remaining() == 0);
  CHECK_THROWS_AS(r.GetU16(), FormatError);
}

TEST_CASE("file helpers") {
  oracle::TempDir dir("base");
  const std::vector<unsigned char> bytes = {1, 2, 3, 250};
  WriteFileBytes(dir / "x.bin", bytes);
  CHECK(ReadFileBytes(dir / "x.bin") == bytes);
  CHECK_THROWS_AS(ReadFileBytes(dir / "missing.bin"), IoError);
  CHECK_THROWS_AS(WriteFileBytes(dir / "no/such/dir/x.bin", bytes), IoError);
}

TEST_CASE("ParallelFor visits every index once and propagates errors") {
  for (int jobs : {1, 3}) {
    std::vector<std::atomic<int>> hits(100);
    ParallelFor(hits.size(), jobs, [&](size_t i) { hits[i]++; });
    for (auto &h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(ParallelFor(10, jobs,
                                [](size_t i) {
                                  if (i == 4) throw std::runtime_error("boom");
                                }),
                    std::runtime_error);
  }
  ParallelFor(0, 4, [](size_t) { FAIL("called on empty range"); });
}
