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

// alsel: budgeted data selection for MT domain adaptation.
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 stage
// failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alsel/align.h"
#include "alsel/analyze.h"
#include "alsel/config.h"
#include "alsel/corpus.h"
#include "alsel/errors.h"
#include "alsel/pipeline.h"
#include "alsel/stages.h"

namespace {

namespace fs = std::filesystem;
using alsel::RunConfig;

constexpr int kExitInvalid = 2;
constexpr int kExitStage = 3;

// Config file plus per-field overrides shared by the config-driven
// subcommands.
struct ConfigArgs {
  std::string path;
  std::map<std::string, std::string> overrides;

  void Register(CLI::App* app) {
    app->add_option("--config", path, "JSON run configuration");
    const nlohmann::json fields = alsel::ToJson(RunConfig{});
    for (const auto& [key, unused] : fields.items()) {
      std::string flag = "--" + key;
      for (auto& ch : flag) {
        if (ch == '_') ch = '-';
      }
      app->add_option_function<std::string>(
             flag,
             [this, key = key](const std::string& v) { overrides[key] = v; },
             "override config field " + key)
          ->group("Config overrides");
    }
  }

  RunConfig Resolve() const {
    RunConfig config = path.empty() ? RunConfig{} : alsel::LoadConfig(path);
    for (const auto& [key, value] : overrides) {
      alsel::ApplyOverride(config, key, value);
    }
    return config;
  }
};

struct StageArgs {
  ConfigArgs config;
  std::int64_t budget = 0;
  std::string run_dir;

  void Register(CLI::App* app) {
    config.Register(app);
    app->add_option("--budget", budget,
                    "budget in words (default: first configured budget)");
    app->add_option("--run-dir", run_dir,
                    "run directory (default: <output_dir>/budget-<B>)");
  }

  std::int64_t Budget(const RunConfig& c) const {
    if (budget > 0) return budget;
    if (c.budgets.empty()) throw alsel::ConfigError("no budget configured");
    return c.budgets.front();
  }

  fs::path Dir(const RunConfig& c) const {
    fs::path dir = run_dir.empty()
                       ? fs::path(c.output_dir) / alsel::RunDirName(Budget(c))
                       : fs::path(run_dir);
    fs::create_directories(dir);
    return dir;
  }
};

void PrintJson(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

// Monolingual file, or the source side of a TSV file.
alsel::Corpus LoadSourceSide(const std::string& path, const std::string& name) {
  const std::string text = alsel::ReadFile(path);
  if (text.find('\t') == std::string::npos) {
    std::istringstream in(text);
    return alsel::ParseCorpus(in, name);
  }
  std::istringstream in(text);
  return alsel::ParseParallelCorpus(in, name).SourceSide();
}

std::vector<alsel::Tokens> TokensOf(const alsel::Corpus& c) {
  std::vector<alsel::Tokens> out;
  for (const auto& s : c.sentences()) out.push_back(s.tokens);
  return out;
}

// Distinguishes bad input (exit 2) from failures while running (exit 3).
template <typename Fn>
int Guard(Fn&& fn) {
  try {
    return fn();
  } catch (const alsel::StageFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  } catch (const alsel::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const alsel::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
}

int RunStage(const StageArgs& args, const std::string& stage) {
  return Guard([&] {
    const RunConfig config = args.config.Resolve();
    alsel::Inputs inputs(config);
    const fs::path dir = args.Dir(config);
    const std::int64_t budget = args.Budget(config);
    alsel::StageOutput out;
    try {
      if (stage == "extract") out = alsel::StageExtract(inputs, dir);
      if (stage == "select") out = alsel::StageSelect(inputs, dir, budget);
      if (stage == "oracle") out = alsel::StageOracle(inputs, dir, budget);
      if (stage == "augment") out = alsel::StageAugment(inputs, dir);
      if (stage == "mix") out = alsel::StageMix(inputs, dir, budget);
      if (stage == "analyze") out = alsel::StageAnalyze(inputs, dir);
    } catch (const alsel::ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw alsel::StageFailure(stage, e.what());
    }
    PrintJson(out.summary);
    return 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted sentence and phrase selection for MT domain adaptation"};
  app.require_subcommand(1);

  // Config-driven stages.
  std::map<std::string, StageArgs> stage_args;
  const std::vector<std::pair<std::string, std::string>> stages = {
      {"extract", "index the unlabeled n-grams and semi-maximal phrases"},
      {"select", "select sentences and/or phrases under a word budget"},
      {"oracle", "translate the selection with the simulated oracle"},
      {"augment", "build synthetic pairs from translated phrases"},
      {"mix", "assemble the fine-tuning manifest"}};
  for (const auto& [name, help] : stages) {
    auto* sub = app.add_subcommand(name, help);
    stage_args[name].Register(sub);
    sub->callback([&, name = name] { std::exit(RunStage(stage_args[name], name)); });
  }

  ConfigArgs pipeline_args;
  auto* pipeline = app.add_subcommand("pipeline", "run every stage per budget");
  pipeline_args.Register(pipeline);
  pipeline->callback([&] {
    std::exit(Guard([&] {
      PrintJson(alsel::RunPipeline(pipeline_args.Resolve()));
      return 0;
    }));
  });

  ConfigArgs validate_args;
  auto* validate = app.add_subcommand("validate", "check a configuration");
  validate_args.Register(validate);
  validate->callback([&] {
    std::exit(Guard([&] {
      const auto failures = alsel::ValidateConfig(validate_args.Resolve());
      PrintJson({{"ok", failures.empty()}, {"failures", failures}});
      return failures.empty() ? 0 : kExitInvalid;
    }));
  });

  // analyze: the pipeline stage plus standalone diagnostics.
  auto* analyze = app.add_subcommand("analyze", "diagnostics");
  analyze->require_subcommand(1);

  StageArgs analyze_run;
  auto* a_run = analyze->add_subcommand("run", "analysis stage of a run");
  analyze_run.Register(a_run);
  a_run->callback([&] { std::exit(RunStage(analyze_run, "analyze")); });

  std::string table_path;
  auto* a_corr = analyze->add_subcommand(
      "correlation", "Pearson r of each coverage column against the score");
  a_corr->add_option("--table", table_path,
                     "TSV with header; last numeric column is the score")
      ->required();
  a_corr->callback([&] {
    std::exit(Guard([&] {
      std::ifstream in(table_path);
      if (!in) throw alsel::IoError("cannot open " + table_path);
      for (const auto& r : alsel::CorrelateTable(in)) {
        std::printf("%s\t%.4f\n", r.column.c_str(), r.r);
      }
      return 0;
    }));
  });

  std::vector<std::string> covering_paths;
  std::string test_path;
  int cov_max_n = 4;
  bool cov_tokens = false;
  auto* a_cov = analyze->add_subcommand("coverage", "test n-gram coverage");
  a_cov->add_option("--covering", covering_paths, "covering text files")
      ->required();
  a_cov->add_option("--test", test_path, "test set")->required();
  a_cov->add_option("--max-n", cov_max_n, "largest n");
  a_cov->add_flag("--tokens", cov_tokens, "weight by n-gram occurrences");
  a_cov->callback([&] {
    std::exit(Guard([&] {
      std::vector<alsel::Tokens> covering;
      for (const auto& p : covering_paths) {
        auto t = TokensOf(LoadSourceSide(p, p));
        covering.insert(covering.end(), t.begin(), t.end());
      }
      auto report = alsel::NgramCoverage(
          covering, TokensOf(LoadSourceSide(test_path, "test")), cov_max_n,
          cov_tokens ? alsel::CoverageWeighting::kTokens
                     : alsel::CoverageWeighting::kTypes);
      std::string desc;
      for (const auto& p : covering_paths) desc += (desc.empty() ? "" : " + ") + p;
      report.covering_description = desc;
      PrintJson(alsel::ToJson(report));
      return 0;
    }));
  });

  std::string hyp_path, ref_path, smoothing = "add-one";
  int bleu_max_n = 4;
  auto* a_bleu = analyze->add_subcommand("bleu", "smoothed sentence BLEU");
  a_bleu->add_option("--hyp", hyp_path, "hypotheses, one per line")->required();
  a_bleu->add_option("--ref", ref_path, "references, one per line")->required();
  a_bleu->add_option("--max-n", bleu_max_n, "largest n");
  a_bleu->add_option("--smoothing", smoothing, "add-one or none")
      ->check(CLI::IsMember({"add-one", "none"}));
  a_bleu->callback([&] {
    std::exit(Guard([&] {
      std::ifstream h(hyp_path), r(ref_path);
      if (!h) throw alsel::IoError("cannot open " + hyp_path);
      if (!r) throw alsel::IoError("cannot open " + ref_path);
      nlohmann::json scores = nlohmann::json::array();
      double sum = 0.0;
      std::string hl, rl;
      std::size_t line = 0;
      while (std::getline(r, rl)) {
        ++line;
        if (!std::getline(h, hl)) hl.clear();
        auto ref = alsel::Tokenize(rl);
        if (!ref) {
          throw alsel::ArgumentError("empty reference on line " +
                                     std::to_string(line));
        }
        auto hyp = alsel::Tokenize(hl).value_or(alsel::Tokens{});
        auto b = alsel::SentenceBleu(
            hyp, *ref, bleu_max_n,
            smoothing == "none" ? alsel::BleuSmoothing::kNone
                                : alsel::BleuSmoothing::kAddOneAboveUnigram);
        sum += b.score;
        scores.push_back(
            {{"line", line}, {"bleu", b.score}, {"empty_hypothesis", b.empty_hypothesis}});
      }
      PrintJson({{"sentences", scores},
                 {"mean", line ? sum / static_cast<double>(line) : 0.0},
                 {"smoothing", smoothing}});
      return 0;
    }));
  });

  std::string sel_path, ood_path, words_test;
  auto* a_words = analyze->add_subcommand("words", "in-domain word statistics");
  a_words->add_option("--selected", sel_path, "selected text")->required();
  a_words->add_option("--ood", ood_path, "out-of-domain corpus")->required();
  a_words->add_option("--test", words_test, "test set")->required();
  a_words->callback([&] {
    std::exit(Guard([&] {
      PrintJson(alsel::ToJson(alsel::ComputeInDomainWordStats(
          TokensOf(LoadSourceSide(sel_path, "selected")),
          TokensOf(LoadSourceSide(ood_path, "ood")),
          TokensOf(LoadSourceSide(words_test, "test")))));
      return 0;
    }));
  });

  std::string acc_test, acc_hyp, acc_ood, acc_align, acc_table;
  auto* a_acc = analyze->add_subcommand(
      "accuracy", "in-domain word translation accuracy");
  a_acc->add_option("--test", acc_test, "test TSV")->required();
  a_acc->add_option("--hyp", acc_hyp, "hypotheses, one per test line")
      ->required();
  a_acc->add_option("--ood", acc_ood, "out-of-domain corpus")->required();
  auto* align_opt =
      a_acc->add_option("--alignments", acc_align, "Pharaoh links for test");
  a_acc->add_option("--table", acc_table, "translation table TSV (fallback)")
      ->excludes(align_opt);
  a_acc->callback([&] {
    std::exit(Guard([&] {
      auto test = alsel::LoadParallelCorpus(acc_test, "test");
      auto hyps = alsel::LoadCorpus(acc_hyp, "hyp");
      auto ood_vocab = alsel::Vocabulary(TokensOf(LoadSourceSide(acc_ood, "ood")));
      alsel::AccuracyResult r;
      if (!acc_align.empty()) {
        auto links = alsel::LoadPharaohFile(acc_align, test);
        r = alsel::InDomainTranslationAccuracy(test, hyps, links, ood_vocab);
      } else if (!acc_table.empty()) {
        std::ifstream t(acc_table);
        if (!t) throw alsel::IoError("cannot open " + acc_table);
        r = alsel::InDomainTranslationAccuracy(
            test, hyps, alsel::TranslationTable::ReadTsv(t), ood_vocab);
      } else {
        throw alsel::ArgumentError("need --alignments or --table");
      }
      PrintJson(alsel::ToJson(r));
      return 0;
    }));
  });

  std::string lr_hyp, lr_ref;
  auto* a_len = analyze->add_subcommand("length-ratio",
                                        "hypothesis over reference length");
  a_len->add_option("--hyp", lr_hyp, "hypotheses")->required();
  a_len->add_option("--ref", lr_ref, "references")->required();
  a_len->callback([&] {
    std::exit(Guard([&] {
      PrintJson({{"length_ratio",
                  alsel::LengthRatio(alsel::LoadCorpus(lr_hyp, "hyp"),
                                     alsel::LoadCorpus(lr_ref, "ref"))}});
      return 0;
    }));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }
  return 0;
}
