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

#include <algorithm>

#include "alsel/config.h"
#include "alsel/errors.h"
#include "doctest.h"
#include "test_util.h"

using namespace alsel;

namespace {

bool Mentions(const std::vector<std::string>& failures,
              const std::string& field) {
  return std::any_of(failures.begin(), failures.end(), [&](const auto& f) {
    return f.rfind(field + ":", 0) == 0;
  });
}

}  // namespace

TEST_CASE("json round trip") {
  RunConfig c;
  c.strategy = "ngf";
  c.budgets = {5, 50};
  c.seed = 99;
  c.lm_add_k = 0.25;
  c.dedupe = true;
  c.context_separator = "<sep>";
  CHECK(ConfigFromJson(ToJson(c)) == c);
  CHECK(ConfigFromJson(nlohmann::json::object()) == RunConfig{});
}

TEST_CASE("unknown keys and wrong types are rejected") {
  CHECK_THROWS_AS(ConfigFromJson({{"budget", 3}}), ConfigError);
  CHECK_THROWS_AS(ConfigFromJson({{"k", "four"}}), ConfigError);
  CHECK_THROWS_AS(ConfigFromJson(nlohmann::json::array()), ConfigError);
}

TEST_CASE("overrides parse by field type") {
  RunConfig c;
  ApplyOverride(c, "strategy", "csse");
  ApplyOverride(c, "dedupe", "true");
  ApplyOverride(c, "k", "7");
  ApplyOverride(c, "seed", "12");
  ApplyOverride(c, "lm_add_k", "0.5");
  ApplyOverride(c, "budgets", "10,20,30");
  ApplyOverride(c, "mix_size", "-1");
  CHECK(c.strategy == "csse");
  CHECK(c.dedupe);
  CHECK(c.k == 7);
  CHECK(c.seed == 12);
  CHECK(c.lm_add_k == 0.5);
  CHECK(c.budgets == std::vector<std::int64_t>{10, 20, 30});

  CHECK_THROWS_AS(ApplyOverride(c, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(ApplyOverride(c, "k", "7x"), ConfigError);
  CHECK_THROWS_AS(ApplyOverride(c, "dedupe", "maybe"), ConfigError);
  CHECK_THROWS_AS(ApplyOverride(c, "seed", "-3"), ConfigError);
  CHECK_THROWS_AS(ApplyOverride(c, "lm_add_k", "x"), ConfigError);
  CHECK_THROWS_AS(ApplyOverride(c, "budgets", "10,,20"), ConfigError);
  CHECK(c.k == 7);
}

TEST_CASE("relative paths resolve against the config file") {
  auto dir = testing_util::TempDir("config");
  testing_util::WriteText(dir / "sub" / "run.json",
                          R"({"unlabeled": "u.txt", "labeled": "/abs/l.tsv",
                              "output_dir": "../out"})");
  auto c = LoadConfig(dir / "sub" / "run.json");
  CHECK(c.unlabeled == (dir / "sub" / "u.txt").string());
  CHECK(c.labeled == "/abs/l.tsv");
  CHECK(c.output_dir == (dir / "out").string());
  testing_util::WriteText(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(LoadConfig(dir / "bad.json"), ConfigError);
}

TEST_CASE("the toy fixture validates") {
  auto c = LoadConfig(testing_util::DataDir() / "toy" / "config.json");
  CHECK(ValidateConfig(c).empty());
}

TEST_CASE("validation failures name their field") {
  auto good = LoadConfig(testing_util::DataDir() / "toy" / "config.json");
  auto expect = [&](const std::string& field, auto mutate) {
    RunConfig c = good;
    mutate(c);
    CAPTURE(field);
    CHECK(Mentions(ValidateConfig(c), field));
  };
  expect("strategy", [](RunConfig& c) { c.strategy = "best"; });
  expect("phrase_strategy", [](RunConfig& c) { c.phrase_strategy = "csse"; });
  expect("budgets", [](RunConfig& c) { c.budgets = {}; });
  expect("budgets", [](RunConfig& c) { c.budgets = {0}; });
  expect("budgets", [](RunConfig& c) { c.budgets = {5, 5}; });
  expect("max_n", [](RunConfig& c) { c.max_n = 0; });
  expect("workers", [](RunConfig& c) { c.workers = 0; });
  expect("lm_add_k", [](RunConfig& c) { c.lm_add_k = 0; });
  expect("mix_size", [](RunConfig& c) { c.mix_size = -2; });
  expect("context_separator",
         [](RunConfig& c) { c.context_separator = "a b"; });
  expect("unlabeled", [](RunConfig& c) { c.unlabeled = "/nonexistent"; });
  expect("reference", [](RunConfig& c) { c.reference.clear(); });
  expect("rttl_scores", [](RunConfig& c) {
    c.strategy = "rttl";
    c.rttl_scores.clear();
  });
  expect("unlabeled_embeddings",
         [](RunConfig& c) { c.unlabeled_embeddings.clear(); });
  expect("alignment_direction",
         [](RunConfig& c) { c.alignment_direction = "both"; });
}

TEST_CASE("simulate-only needs no reference or mixing embeddings") {
  auto c = LoadConfig(testing_util::DataDir() / "toy" / "config.json");
  c.simulate_only = true;
  c.reference.clear();
  c.strategy = "ngf-smp";
  c.unlabeled_embeddings.clear();
  c.labeled_embeddings.clear();
  CHECK(ValidateConfig(c).empty());
  CHECK_FALSE(NeedsEmbeddings(c));
  c.strategy = "csse";
  CHECK(NeedsEmbeddings(c));
}
