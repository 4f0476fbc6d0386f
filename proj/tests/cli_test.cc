// Copyright 2026 The rhtag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "cli.h"
#include "doctest.h"
#include "json.hpp"
#include "support.h"

namespace rhtag {
namespace {

using testing::read_file;
using testing::TempDir;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json json_file(const std::filesystem::path& p) { return nlohmann::json::parse(read_file(p)); }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Synthetic corpora shared by the cases below.
struct Fixture {
  TempDir dir;
  std::string pe;   // patient-experience corpus
  std::string pio;  // PIO corpus
  std::string gaz;

  Fixture() {
    REQUIRE(cli({"--seed", "3", "--out", (dir / "pe").string(), "synth", "--spec",
                 "question=200,claim=200,per_exp=200"}).code == 0);
    REQUIRE(cli({"--seed", "7", "--out", (dir / "pio").string(), "synth", "--spec",
                 "population=150,intervention=150,outcome=150"}).code == 0);
    pe = (dir / "pe" / "corpus.jsonl").string();
    pio = (dir / "pio" / "corpus.jsonl").string();
    gaz = (dir / "pio" / "gazetteer.txt").string();
  }
  std::string out(const std::string& name) const { return (dir / name).string(); }
};

TEST_CASE("validate and stats") {
  Fixture f;
  const Result ok = cli({"--out", f.out("stats"), "stats", f.pe});
  CHECK(ok.code == 0);
  CHECK(std::filesystem::exists(f.dir / "stats" / "stats.json"));
  CHECK(json_file(f.dir / "stats" / "stats.json")["entity_counts"]["question"] == 200);
  CHECK(cli({"--out", f.out("v"), "validate", f.pe}).code == 0);

  testing::write_file(f.dir / "bad.jsonl",
                      R"({"post_id":"p1","condition":"gout","text":"short","spans":[{"start":0,"end":6,"label":"claim"}]})"
                      "\n");
  const Result bad = cli({"--out", f.out("bad"), "validate", (f.dir / "bad.jsonl").string()});
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "offset_out_of_range"));
  CHECK(json_file(f.dir / "bad" / "validation_report.json")["errors"].size() == 1);
  CHECK(cli({"--out", f.out("bad2"), "stats", (f.dir / "bad.jsonl").string()}).code == 1);
  CHECK_FALSE(std::filesystem::exists(f.dir / "bad2" / "stats.json"));

  const Result schema = cli({"--schema", "subtask3", "validate", f.pe});
  CHECK(schema.code == 2);
  CHECK(contains(schema.err, "unknown schema"));
  const Result missing = cli({"validate", (f.dir / "absent.jsonl").string()});
  CHECK(missing.code == 2);
  CHECK(contains(missing.err, "absent.jsonl"));
  testing::write_file(f.dir / "broken.jsonl", "{broken\n");
  CHECK(cli({"--out", f.out("b"), "validate", (f.dir / "broken.jsonl").string()}).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"run", "--epochs", "many"}).code == 2);
  TempDir d;
  testing::write_file(d / "cfg.json", R"({"schema":"subtask1","colour":"red"})");
  const Result r = cli({"--config", (d / "cfg.json").string(), "run"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "colour"));
  CHECK(cli({"--out", (d / "x").string(), "synth", "--spec", "question"}).code == 2);
}

TEST_CASE("run writes a reproducible experiment directory") {
  Fixture f;
  const std::vector<std::string> base = {"--seed", "3", "run", "--corpus", f.pe};
  auto args = base;
  args.insert(args.begin(), {"--out", f.out("r1")});
  const Result r1 = cli(args);
  REQUIRE(r1.code == 0);
  for (const char* name : {"manifest.json", "model.rhtm", "predictions.jsonl", "metrics.json",
                           "confusion.csv", "sentence_confusion.csv", "run.log", "train.jsonl",
                           "validation.jsonl"}) {
    CHECK_MESSAGE(std::filesystem::exists(f.dir / "r1" / name), name);
  }
  const auto metrics = json_file(f.dir / "r1" / "metrics.json");
  CHECK(metrics["token_level"]["micro"]["f1"].get<double>() >= 0.95);
  CHECK(metrics.contains("sentence_level"));
  const auto manifest = json_file(f.dir / "r1" / "manifest.json");
  CHECK(manifest["config"]["hyper"]["epochs"] == 10);
  CHECK(manifest["config"]["hyper"]["train_batch_size"] == 64);
  CHECK(manifest["config"]["seed"] == 3);
  CHECK_FALSE(contains(read_file(f.dir / "r1" / "manifest.json"), "T0"));

  args = base;
  args.insert(args.begin(), {"--out", f.out("r2")});
  REQUIRE(cli(args).code == 0);
  for (const char* name : {"metrics.json", "predictions.jsonl", "model.rhtm", "confusion.csv"}) {
    CHECK_MESSAGE(read_file(f.dir / "r1" / name) == read_file(f.dir / "r2" / name), name);
  }
  const std::string m1 = read_file(f.dir / "r1" / "manifest.json");
  std::string m2 = read_file(f.dir / "r2" / "manifest.json");
  m2.replace(m2.find(f.out("r2")), f.out("r2").size(), f.out("r1"));
  CHECK(m1 == m2);

  // Re-running from the manifest alone reproduces the metrics.
  const Result again = cli({"--config", f.out("r1") + "/manifest.json", "--out", f.out("r3"), "run"});
  REQUIRE(again.code == 0);
  CHECK(read_file(f.dir / "r1" / "metrics.json") == read_file(f.dir / "r3" / "metrics.json"));

  const Result self = cli({"--out", f.out("cmp"), "--seed", "1", "compare", "--resamples", "500",
                           f.out("r1"), f.out("r2")});
  REQUIRE(self.code == 0);
  CHECK(json_file(f.dir / "cmp" / "bootstrap.json")["p_value"] == 1.0);
  CHECK(contains(self.out, "p 1"));

  REQUIRE(cli({"--seed", "4", "--out", f.out("r4"), "run", "--corpus", f.pe, "--validation-fraction", "0.3"}).code == 0);
  CHECK(cli({"--out", f.out("cmp2"), "compare", f.out("r1"), f.out("r4")}).code == 4);
  CHECK(cli({"--out", f.out("cmp3"), "compare", f.out("r1"), f.out("absent")}).code == 2);
}

TEST_CASE("step-by-step commands agree with run") {
  Fixture f;
  REQUIRE(cli({"--seed", "3", "--schema", "subtask2", "--out", f.out("run"), "run", "--corpus", f.pio,
               "--augment", "--gazetteer", f.gaz}).code == 0);
  REQUIRE(cli({"--seed", "3", "--schema", "subtask2", "--out", f.out("split"), "split", f.pio}).code == 0);
  CHECK(read_file(f.dir / "split" / "validation.jsonl") == read_file(f.dir / "run" / "validation.jsonl"));
  REQUIRE(cli({"--seed", "3", "--schema", "subtask2", "--out", f.out("model"), "train",
               f.out("split") + "/train.jsonl", "--augment", "--gazetteer", f.gaz}).code == 0);
  CHECK(read_file(f.dir / "model" / "model.rhtm").size() > 0);
  REQUIRE(cli({"--out", f.out("pred"), "predict", "--model", f.out("model") + "/model.rhtm",
               f.out("split") + "/validation.jsonl"}).code == 0);
  CHECK(read_file(f.dir / "pred" / "predictions.jsonl") == read_file(f.dir / "run" / "predictions.jsonl"));
  REQUIRE(cli({"--schema", "subtask2", "--out", f.out("eval"), "evaluate",
               f.out("pred") + "/predictions.jsonl"}).code == 0);
  CHECK(read_file(f.dir / "eval" / "metrics.json") == read_file(f.dir / "run" / "metrics.json"));

  // Prediction refuses a lexicon that differs from the training one.
  CHECK(cli({"--out", f.out("pred2"), "predict", "--model", f.out("model") + "/model.rhtm",
             "--gazetteer", f.out("pio") + "/corpus.jsonl", f.out("split") + "/validation.jsonl"}).code != 0);
  TempDir g;
  testing::write_file(g / "g.txt", "[chemical]\nsomething\n");
  CHECK(cli({"--out", f.out("pred3"), "predict", "--model", f.out("model") + "/model.rhtm",
             "--gazetteer", (g / "g.txt").string(), f.out("split") + "/validation.jsonl"}).code == 1);
  CHECK(cli({"--schema", "subtask1", "--out", f.out("pred4"), "predict", "--model",
             f.out("model") + "/model.rhtm", f.out("split") + "/validation.jsonl"}).code == 1);

  REQUIRE(cli({"--schema", "subtask2", "--out", f.out("aug"), "augment", f.pio, "--gazetteer", f.gaz}).code == 0);
  CHECK(contains(read_file(f.dir / "aug" / "augmented.conll"), "@@"));
}

TEST_CASE("augmentation helps when markers are informative") {
  Fixture f;
  REQUIRE(cli({"--seed", "7", "--schema", "subtask2", "--out", f.out("a"), "run", "--corpus", f.pio,
               "--augment", "--gazetteer", f.gaz}).code == 0);
  REQUIRE(cli({"--seed", "7", "--schema", "subtask2", "--out", f.out("b"), "run", "--corpus", f.pio}).code == 0);
  CHECK(json_file(f.dir / "a" / "manifest.json")["config"]["hyper"]["epochs"] == 20);
  const Result r = cli({"--seed", "7", "--out", f.out("cmp"), "compare", f.out("a"), f.out("b")});
  REQUIRE(r.code == 0);
  const auto b = json_file(f.dir / "cmp" / "bootstrap.json");
  CHECK(b["observed_delta"].get<double>() > 0.0);
  CHECK(b["p_value"].get<double>() < 0.05);
}

TEST_CASE("backend selection") {
  Fixture f;
  const Result none = cli({"--schema", "subtask2", "--out", f.out("e"), "run", "--corpus", f.pio,
                           "--backend", "external"});
  CHECK(none.code == 3);
  CHECK(contains(none.err, "backend unreachable"));
  const Result ext = cli({"--schema", "subtask2", "--out", f.out("m"), "run", "--corpus", f.pio,
                          "--backend", "external", "--adapter", RHTAG_MOCK_ADAPTER, "--epochs", "2"});
  CHECK(ext.code == 0);
  CHECK(cli({"--schema", "subtask2", "--out", f.out("x"), "run", "--corpus", f.pio, "--backend", "crf"}).code == 2);
}

TEST_CASE("exit codes of the installed binary") {
  const auto status = [](const std::string& args) {
    const int raw = std::system((std::string(RHTAG_CLI_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("--schema subtask3 validate /dev/null") == 2);
  CHECK(status("validate /nonexistent.jsonl") == 2);
  CHECK(status("--help") == 0);
}

}  // namespace
}  // namespace rhtag
