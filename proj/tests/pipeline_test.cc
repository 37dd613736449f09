// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>

#include "alsel/mix.h"
#include "alsel/pipeline.h"
#include "doctest.h"
#include "test_util.h"

using namespace alsel;
namespace fs = std::filesystem;

namespace {

// Copy of the toy fixture in a scratch directory, run at budget 40.
fs::path ToyCopy(const std::string& name) {
  auto dir = testing_util::TempDir(name);
  fs::copy(testing_util::DataDir() / "toy", dir, fs::copy_options::recursive);
  return dir;
}

RunConfig ToyConfig(const fs::path& dir) {
  auto c = LoadConfig(dir / "config.json");
  c.budgets = {40};
  return c;
}

int Cli(const std::string& args) {
  const std::string cmd =
      std::string(ALSEL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("pipeline report, ledger and digests") {
  auto dir = ToyCopy("pipe_report");
  auto c = ToyConfig(dir);
  auto sweep = RunPipeline(c);
  REQUIRE(sweep["runs"].size() == 1);
  CHECK(sweep["runs"][0]["run_dir"] == "budget-40");
  CHECK(fs::exists(dir / "runs" / "sweep.json"));
  CHECK_FALSE(fs::exists(dir / "runs" / ".lock"));

  const fs::path run = dir / "runs" / "budget-40";
  auto report = ReadJsonFile(run / "report.json");
  for (const char* key :
       {"budget", "run_dir", "config", "stages", "ledger", "dropped", "outputs"}) {
    CHECK(report.contains(key));
  }
  CHECK(report["stages"].size() == 6);
  const auto digests = DigestDirectory(run);
  CHECK(report["outputs"].size() == digests.size());
  for (const auto& [file, sha] : digests.items()) {
    CAPTURE(file);
    CHECK(report["outputs"][file]["sha256"] == sha);
    CHECK(report["outputs"][file]["stage"] != "unknown");
  }
  CHECK(sweep["runs"][0]["manifest_sha256"] == digests["manifest.jsonl"]);

  const auto& ledger = report["ledger"];
  CHECK(ledger["sentence_pool"]["allocated"] == 20);
  CHECK(ledger["phrase_pool"]["allocated"] == 20);
  CHECK(ledger["sentence_pool"]["items"].get<int>() > 0);
  CHECK(ledger["phrase_pool"]["items"].get<int>() > 0);
  CHECK(ledger["phrase_pool"]["within_overshoot_bound"] == true);
}

TEST_CASE("a held lock refuses a second run") {
  auto dir = ToyCopy("pipe_lock");
  auto c = ToyConfig(dir);
  {
    DirectoryLock lock(c.output_dir);
    CHECK_THROWS_AS(RunPipeline(c), ConfigError);
  }
  CHECK_NOTHROW(RunPipeline(c));
}

TEST_CASE("a failing stage moves the run aside") {
  auto dir = ToyCopy("pipe_fail");
  testing_util::WriteText(dir / "test.tsv", "no tab on this line\n");
  auto c = ToyConfig(dir);
  CHECK_THROWS_AS(RunPipeline(c), StageFailure);
  const fs::path failed = dir / "runs" / "failed" / "budget-40";
  REQUIRE(fs::exists(failed / "error.json"));
  CHECK(ReadJsonFile(failed / "error.json")["stage"] == "analyze");
  CHECK_FALSE(fs::exists(dir / "runs" / "budget-40"));
  CHECK_FALSE(fs::exists(dir / "runs" / ".lock"));
}

TEST_CASE("freeze file fixes the mixed subset") {
  auto dir = ToyCopy("pipe_freeze");
  auto c = ToyConfig(dir);
  c.mixing = "sampled";
  c.freeze_file = (dir / "freeze.jsonl").string();
  RunPipeline(c);
  REQUIRE(fs::exists(c.freeze_file));
  const auto first = ReadFreezeFile(c.freeze_file);
  const std::string mixed = ReadFile(dir / "runs" / "budget-40" / "mixed.jsonl");

  c.seed = 2;
  RunPipeline(c);
  CHECK(ReadFreezeFile(c.freeze_file) == first);
  CHECK(ReadFile(dir / "runs" / "budget-40" / "mixed.jsonl") == mixed);
  auto mix = ReadJsonFile(dir / "runs" / "budget-40" / "mix.json");
  CHECK(mix["mixing"]["m_rule"] == "freeze-file");
}

TEST_CASE("simulate-only stops after selection") {
  auto dir = ToyCopy("pipe_sim");
  auto c = ToyConfig(dir);
  c.simulate_only = true;
  c.reference.clear();
  RunPipeline(c);
  const fs::path run = dir / "runs" / "budget-40";
  CHECK(fs::exists(run / "selection.json"));
  CHECK(fs::exists(run / "analysis.json"));
  CHECK_FALSE(fs::exists(run / "oracle.jsonl"));
  CHECK_FALSE(fs::exists(run / "manifest.jsonl"));
}

TEST_CASE("stage-by-stage cli matches the pipeline") {
  auto dir = ToyCopy("pipe_cli");
  auto c = ToyConfig(dir);
  RunPipeline(c);
  const fs::path staged = dir / "staged";
  const std::string common = "--config " + (dir / "config.json").string() +
                             " --budget 40 --run-dir " + staged.string();
  for (const char* stage :
       {"extract", "select", "oracle", "augment", "mix", "analyze run"}) {
    CAPTURE(stage);
    REQUIRE(Cli(std::string(stage) + " " + common) == 0);
  }
  CHECK(DigestDirectory(staged) == DigestDirectory(dir / "runs" / "budget-40"));
}

TEST_CASE("cli exit codes") {
  auto dir = ToyCopy("pipe_exit");
  const std::string config = "--config " + (dir / "config.json").string();
  CHECK(Cli("validate " + config) == 0);
  CHECK(Cli("validate " + config + " --strategy best") == 2);
  CHECK(Cli("validate " + config + " --k seven") == 2);
  CHECK(Cli("no-such-command") == 2);
  CHECK(Cli("pipeline " + config + " --budgets 40") == 0);
  testing_util::WriteText(dir / "test.tsv", "no tab on this line\n");
  CHECK(Cli("pipeline " + config + " --budgets 40") == 3);
  CHECK(Cli("analyze bleu --hyp /nonexistent --ref /nonexistent") == 3);
}
