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

#include <sstream>

#include "alsel/align.h"
#include "alsel/errors.h"
#include "alsel/oracle.h"
#include "doctest.h"
#include "test_util.h"

using namespace alsel;
using testing_util::MakeParallel;
using testing_util::P;
using testing_util::Toks;

TEST_CASE("sentence translation is a reference lookup") {
  auto ref = MakeParallel({{"a b", "x y"}, {"c", "z"}});
  std::vector<SentenceId> ids = {1, 0};
  auto out = TranslateSentences(ids, ref);
  REQUIRE(out.size() == 2);
  CHECK(out[0].id == 1);
  CHECK(out[0].target == Tokens{"z"});
  CHECK(out[1].source == Tokens{"a", "b"});
  CHECK(TranslateSentences({}, ref).empty());

  std::vector<SentenceId> dup = {0, 0};
  CHECK_THROWS_AS(TranslateSentences(dup, ref), ArgumentError);
  std::vector<SentenceId> missing = {0, 7};
  CHECK_THROWS_AS(TranslateSentences(missing, ref), OracleGapError);
}

TEST_CASE("phrase with a clean one-to-one alignment") {
  auto ref = MakeParallel({{"a b c", "x y z"}});
  auto aligner = FixedAligner({{{0, 0}, {1, 1}, {2, 2}}});
  std::vector<Phrase> phrases = {P("b c")};
  auto out = TranslatePhrases(phrases, ref, aligner);
  REQUIRE(out.responses.size() == 1);
  CHECK(out.responses[0].target == Tokens{"y", "z"});
  CHECK(out.responses[0].votes == 1);
  CHECK(out.responses[0].provenance == std::vector<SentenceId>{0});
  CHECK(out.dropped.empty());
}

TEST_CASE("majority vote over occurrences") {
  auto ref = MakeParallel({{"k l m", "K L M"},
                           {"q k l", "Q K L"},
                           {"k l", "K L"},
                           {"k l", "W"}});
  auto aligner = FixedAligner({{{0, 0}, {1, 1}, {2, 2}},
                               {{0, 0}, {1, 1}, {2, 2}},
                               {{0, 0}, {1, 1}},
                               {{0, 0}, {1, 0}}});
  std::vector<Phrase> phrases = {P("k l")};
  auto out = TranslatePhrases(phrases, ref, aligner);
  REQUIRE(out.responses.size() == 1);
  CHECK(out.responses[0].target == Tokens{"K", "L"});
  CHECK(out.responses[0].votes == 3);
  CHECK(out.responses[0].provenance == std::vector<SentenceId>{0, 1, 2});
}

TEST_CASE("vote ties go to the shorter then smaller span") {
  auto ref = MakeParallel({{"k", "B C"}, {"k", "A"}, {"k", "Z"}});
  auto aligner =
      FixedAligner({{{0, 0}, {0, 1}}, {{0, 0}}, {{0, 0}}});
  std::vector<Phrase> phrases = {P("k")};
  auto out = TranslatePhrases(phrases, ref, aligner);
  REQUIRE(out.responses.size() == 1);
  CHECK(out.responses[0].target == Tokens{"A"});
}

TEST_CASE("absent and unaligned phrases are dropped") {
  auto ref = MakeParallel({{"a b", "x y"}});
  auto aligner = FixedAligner({{{0, 0}}});
  std::vector<Phrase> phrases = {P("q"), P("b"), P("a")};
  auto out = TranslatePhrases(phrases, ref, aligner);
  REQUIRE(out.responses.size() == 1);
  CHECK(out.responses[0].source == Tokens{"a"});
  REQUIRE(out.dropped.size() == 2);
  CHECK(out.dropped[0].phrase == P("q"));
  CHECK(out.dropped[0].reason == "absent-from-reference");
  CHECK(out.dropped[1].phrase == P("b"));
  CHECK(out.dropped[1].reason == "no-aligned-span");
  auto j = DroppedJson(out.dropped);
  CHECK(j.size() == 2);
}

TEST_CASE("table aligner and worker count give the same answer") {
  auto ref = MakeParallel({{"a b", "x y"}, {"b c", "y z"}, {"a c", "x z"},
                           {"a b c", "x y z"}});
  auto table = TrainIbm1(ref, {10, 1}).table;
  std::vector<Phrase> phrases = {P("a"), P("b c"), P("c")};
  auto one = TranslatePhrases(phrases, ref, TableAligner(ref, table), 1);
  auto four = TranslatePhrases(phrases, ref, TableAligner(ref, table), 4);
  REQUIRE(one.responses.size() == four.responses.size());
  for (std::size_t i = 0; i < one.responses.size(); ++i) {
    CHECK(one.responses[i].target == four.responses[i].target);
    CHECK(one.responses[i].provenance == four.responses[i].provenance);
  }
  REQUIRE(one.responses.size() == 3);
  CHECK(one.responses[0].target == Tokens{"x"});
}

TEST_CASE("provenance jsonl round trip") {
  OracleResponse r;
  r.kind = OracleResponse::Kind::kPhrase;
  r.source = Toks("a b");
  r.target = Toks("x");
  r.provenance = {3, 9};
  r.votes = 2;
  OracleResponse s;
  s.id = 4;
  s.source = Toks("c");
  s.target = Toks("z");
  std::vector<OracleResponse> all = {s, r};
  std::ostringstream out;
  WriteProvenanceJsonl(out, all);
  std::istringstream in(out.str());
  auto back = ReadProvenanceJsonl(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].kind == OracleResponse::Kind::kSentence);
  CHECK(back[0].id == 4);
  CHECK(back[1].kind == OracleResponse::Kind::kPhrase);
  CHECK(back[1].provenance == std::vector<SentenceId>{3, 9});
  CHECK(back[1].votes == 2);

  std::ostringstream tsv;
  WriteResponsesTsv(tsv, all);
  CHECK(tsv.str() == "c\tz\na b\tx\n");
}
