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

// End-to-end driver: extract, select, oracle, augment, mix, analyze for
// every configured budget, one run directory "budget-<B>" each.

#ifndef ALSEL_PIPELINE_H_
#define ALSEL_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "alsel/config.h"
#include "alsel/errors.h"
#include "alsel/stages.h"
#include "json.hpp"

namespace alsel {

class StageFailure : public Error {
 public:
  StageFailure(std::string stage, const std::string& message)
      : Error("stage " + stage + " failed: " + message),
        stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Exclusive ownership of a directory through a lock file, released on
// destruction. Throws ConfigError when the lock is already held.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

// SHA-256 of every regular file under `dir` except report.json, keyed by
// the relative path.
nlohmann::json DigestDirectory(const std::filesystem::path& dir);

std::string RunDirName(std::int64_t budget);

// Runs all stages for one budget into `run_dir` (recreated) and writes
// report.json there. On failure the directory is moved to
// <output_dir>/failed/<name> with an error.json, and StageFailure is thrown.
nlohmann::json RunBudget(Inputs& inputs, std::int64_t budget,
                         const std::filesystem::path& run_dir);

// Validates, locks the output directory and runs every budget. Returns
// the sweep summary (also written to <output_dir>/sweep.json). Throws
// ConfigError when validation fails.
nlohmann::json RunPipeline(const RunConfig& config);

}  // namespace alsel

#endif  // ALSEL_PIPELINE_H_
