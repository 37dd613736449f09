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

#include "alsel/pipeline.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <functional>
#include <vector>

#include "alsel/digest.h"

namespace alsel {

namespace fs = std::filesystem;

DirectoryLock::DirectoryLock(const fs::path& dir) : path_(dir / ".lock") {
  fs::create_directories(dir);
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      throw ConfigError(dir.string() + " is locked by another run (" +
                        path_.string() + ")");
    }
    throw IoError("cannot create " + path_.string() + ": " +
                  std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

nlohmann::json DigestDirectory(const fs::path& dir) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel == "report.json") continue;
    files.push_back(std::move(rel));
  }
  std::sort(files.begin(), files.end());
  nlohmann::json out = nlohmann::json::object();
  for (const auto& f : files) out[f] = Sha256File(dir / f);
  return out;
}

std::string RunDirName(std::int64_t budget) {
  return "budget-" + std::to_string(budget);
}

namespace {

void MoveToFailed(const fs::path& run_dir, const std::string& stage,
                  const std::string& message) {
  const fs::path failed = run_dir.parent_path() / "failed" / run_dir.filename();
  std::error_code ec;
  fs::create_directories(run_dir, ec);
  WriteTextFile(run_dir / "error.json",
                nlohmann::json{{"stage", stage}, {"message", message}}.dump(2) +
                    "\n");
  fs::create_directories(failed.parent_path());
  fs::remove_all(failed, ec);
  fs::rename(run_dir, failed);
}

}  // namespace

nlohmann::json RunBudget(Inputs& inputs, std::int64_t budget,
                         const fs::path& run_dir) {
  const RunConfig& c = inputs.config();
  fs::remove_all(run_dir);
  fs::create_directories(run_dir);

  nlohmann::json stages = nlohmann::json::array();
  nlohmann::json stage_of_file = nlohmann::json::object();
  nlohmann::json ledger, dropped = nlohmann::json::object();
  auto run = [&](const std::string& name,
                 const std::function<StageOutput()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    StageOutput out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      MoveToFailed(run_dir, name, e.what());
      throw StageFailure(name, e.what());
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    for (const auto& f : out.files) stage_of_file[f] = name;
    stages.push_back({{"name", name},
                      {"seconds", seconds},
                      {"files", out.files.size()},
                      {"summary", out.summary}});
    return out;
  };

  if (UsesPhraseSelection(c)) run("extract", [&] { return StageExtract(inputs, run_dir); });
  ledger = run("select", [&] { return StageSelect(inputs, run_dir, budget); })
               .summary;
  if (!c.simulate_only) {
    auto oracle =
        run("oracle", [&] { return StageOracle(inputs, run_dir, budget); });
    dropped["oracle"] = oracle.summary.at("dropped_count");
    if (oracle.summary.at("refund_rounds").get<int>() > 0) {
      ledger = ReadJsonFile(run_dir / "selection.json");
    }
    auto augment = run("augment", [&] { return StageAugment(inputs, run_dir); });
    if (augment.summary.contains("dropped")) {
      dropped["augment"] = augment.summary.at("dropped");
    }
    auto mix = run("mix", [&] { return StageMix(inputs, run_dir, budget); });
    dropped["dedupe"] = mix.summary.at("dedupe_removed");
  }
  run("analyze", [&] { return StageAnalyze(inputs, run_dir); });

  nlohmann::json outputs = nlohmann::json::object();
  const nlohmann::json digests = DigestDirectory(run_dir);
  for (const auto& [file, digest] : digests.items()) {
    outputs[file] = {{"sha256", digest},
                     {"stage", stage_of_file.value(file, "unknown")}};
  }
  nlohmann::json report = {{"budget", budget},
                           {"run_dir", run_dir.filename().string()},
                           {"config", ToJson(c)},
                           {"stages", stages},
                           {"ledger", ledger},
                           {"dropped", dropped},
                           {"outputs", outputs}};
  WriteTextFile(run_dir / "report.json", report.dump(2) + "\n");
  return report;
}

nlohmann::json RunPipeline(const RunConfig& config) {
  const auto failures = ValidateConfig(config);
  if (!failures.empty()) {
    std::string msg = "invalid config:";
    for (const auto& f : failures) msg += "\n  " + f;
    throw ConfigError(msg);
  }
  const fs::path out_dir = config.output_dir;
  DirectoryLock lock(out_dir);
  Inputs inputs(config);
  nlohmann::json runs = nlohmann::json::array();
  for (std::int64_t budget : config.budgets) {
    const fs::path run_dir = out_dir / RunDirName(budget);
    nlohmann::json report = RunBudget(inputs, budget, run_dir);
    runs.push_back({{"budget", budget},
                    {"run_dir", RunDirName(budget)},
                    {"manifest_sha256",
                     report["outputs"].contains("manifest.jsonl")
                         ? report["outputs"]["manifest.jsonl"]["sha256"]
                         : nlohmann::json()}});
  }
  nlohmann::json sweep = {{"budgets", config.budgets}, {"runs", runs}};
  WriteTextFile(out_dir / "sweep.json", sweep.dump(2) + "\n");
  return sweep;
}

}  // namespace alsel
