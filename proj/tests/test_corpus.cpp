// Copyright 2026 The JudgeFuse Authors
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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jf/corpus.hpp"
#include "jf/io.hpp"
#include "jf/unicode.hpp"
#include "jf/util.hpp"
#include "support/testutil.hpp"

using namespace jf;

namespace {

const char* kCorpusJsonl =
    R"({"id":"L1","kind":"statute","title":"theft","text":"whoever steals property"}
{"id":"L2","kind":"statute","title":"fraud","text":"whoever defrauds another"}
{"id":"L3","kind":"precedent","title":"case x","text":"a decided matter"}
)";

const char* kCaseJsonl =
    R"({"id":"c1","facts":"the defendant stole goods","gold_evidence_ids":["L1","L2"],"gold_charges":["theft"],"gold_prison_months":18,"gold_fine_amount":5000,"gold_verdict":"conviction","gold_judgment_text":"so ordered"}
)";

}  // namespace

TEST_CASE("ingest_corpus counts and indexes records") {
  test::TempDir tmp("corpus");
  test::write_text(tmp.file("corpus.jsonl"), kCorpusJsonl);

  CorpusStore store;
  auto report = store.ingest_corpus(tmp.file("corpus.jsonl"));
  CHECK(report.record_count == 3);
  CHECK(report.warnings.empty());
  CHECK(store.document_count() == 3);
  REQUIRE(store.find_document("L3") != nullptr);
  CHECK(store.find_document("L3")->kind == DocKind::Precedent);
  CHECK(store.find_document("L9") == nullptr);
}

TEST_CASE("ingest_corpus rejects duplicate ids naming the offender") {
  test::TempDir tmp("corpus");
  test::write_text(tmp.file("dup.jsonl"),
                   R"({"id":"L1","kind":"statute","title":"a","text":"x"}
{"id":"L1","kind":"statute","title":"b","text":"y"}
)");
  CorpusStore store;
  CHECK_THROWS_WITH_AS(store.ingest_corpus(tmp.file("dup.jsonl")),
                       doctest::Contains("duplicate document id: L1"), ValidationError);
}

TEST_CASE("ingest_corpus of an empty file warns and yields count 0") {
  test::TempDir tmp("corpus");
  test::write_text(tmp.file("empty.jsonl"), "");
  CorpusStore store;
  auto report = store.ingest_corpus(tmp.file("empty.jsonl"));
  CHECK(report.record_count == 0);
  CHECK(report.warnings.size() == 1);
}

TEST_CASE("ingest_corpus rejects empty text and malformed lines with line numbers") {
  test::TempDir tmp("corpus");
  test::write_text(tmp.file("empty_text.jsonl"),
                   R"({"id":"L1","kind":"statute","title":"a","text":""}
)");
  CorpusStore store;
  CHECK_THROWS_AS(store.ingest_corpus(tmp.file("empty_text.jsonl")), ValidationError);

  test::write_text(tmp.file("bad.jsonl"), "{\"id\":\"L1\"\n");
  CorpusStore store2;
  CHECK_THROWS_WITH_AS(store2.ingest_corpus(tmp.file("bad.jsonl")), doctest::Contains(":1:"),
                       ValidationError);
}

TEST_CASE("ingest_cases resolves gold evidence against the corpus") {
  test::TempDir tmp("cases");
  test::write_text(tmp.file("corpus.jsonl"), kCorpusJsonl);
  test::write_text(tmp.file("cases.jsonl"), kCaseJsonl);

  CorpusStore store;
  store.ingest_corpus(tmp.file("corpus.jsonl"));
  auto report = store.ingest_cases(tmp.file("cases.jsonl"));
  CHECK(report.record_count == 1);
  REQUIRE(store.find_case("c1") != nullptr);
  CHECK(store.find_case("c1")->gold_prison_months == 18);
}

TEST_CASE("ingest_cases rejects dangling references and negative penalties") {
  test::TempDir tmp("cases");
  test::write_text(tmp.file("corpus.jsonl"), kCorpusJsonl);
  CorpusStore store;
  store.ingest_corpus(tmp.file("corpus.jsonl"));

  test::write_text(tmp.file("dangling.jsonl"),
                   R"({"id":"c1","facts":"f","gold_evidence_ids":["L9"],"gold_verdict":"conviction"}
)");
  CHECK_THROWS_WITH_AS(store.ingest_cases(tmp.file("dangling.jsonl")), doctest::Contains("L9"),
                       ValidationError);

  test::write_text(tmp.file("negative.jsonl"),
                   R"({"id":"c2","facts":"f","gold_evidence_ids":["L1"],"gold_prison_months":-3,"gold_verdict":"conviction"}
)");
  CHECK_THROWS_AS(store.ingest_cases(tmp.file("negative.jsonl")), ValidationError);
}

TEST_CASE("null penalty fields stay distinct from zero") {
  test::TempDir tmp("cases");
  test::write_text(tmp.file("corpus.jsonl"), kCorpusJsonl);
  test::write_text(
      tmp.file("cases.jsonl"),
      R"({"id":"c1","facts":"f","gold_evidence_ids":["L1"],"gold_prison_months":null,"gold_fine_amount":0,"gold_verdict":"conviction","gold_judgment_text":""}
)");
  CorpusStore store;
  store.ingest_corpus(tmp.file("corpus.jsonl"));
  store.ingest_cases(tmp.file("cases.jsonl"));
  const auto* c = store.find_case("c1");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->gold_prison_months.has_value());
  REQUIRE(c->gold_fine_amount.has_value());
  CHECK(*c->gold_fine_amount == 0.0);
}

TEST_CASE("snapshot round-trips record-for-record") {
  test::TempDir tmp("snap");
  test::write_text(tmp.file("corpus.jsonl"), kCorpusJsonl);
  test::write_text(tmp.file("cases.jsonl"), kCaseJsonl);

  CorpusStore store;
  store.ingest_corpus(tmp.file("corpus.jsonl"));
  store.ingest_cases(tmp.file("cases.jsonl"));
  store.snapshot(tmp.file("store.jfs"));

  CorpusStore loaded = CorpusStore::load_snapshot(tmp.file("store.jfs"));
  CHECK(loaded == store);

  // Snapshot of the loaded store is byte-identical to the first one.
  loaded.snapshot(tmp.file("store2.jfs"));
  CHECK(io::read_file(tmp.file("store.jfs")) == io::read_file(tmp.file("store2.jfs")));
}

TEST_CASE("snapshot of an empty store loads back empty") {
  test::TempDir tmp("snap");
  CorpusStore store;
  store.snapshot(tmp.file("empty.jfs"));
  CorpusStore loaded = CorpusStore::load_snapshot(tmp.file("empty.jfs"));
  CHECK(loaded.document_count() == 0);
  CHECK(loaded.case_count() == 0);
}

TEST_CASE("load_snapshot rejects a wrong magic header") {
  test::TempDir tmp("snap");
  test::write_text(tmp.file("bad.jfs"), "NOTSTORE\n{}");
  CHECK_THROWS_WITH_AS(CorpusStore::load_snapshot(tmp.file("bad.jfs")),
                       doctest::Contains("JFSTORE1"), IoError);
}

TEST_CASE("ingesting the same files twice yields identical stores") {
  test::TempDir tmp("det");
  test::write_text(tmp.file("corpus.jsonl"), kCorpusJsonl);
  test::write_text(tmp.file("cases.jsonl"), kCaseJsonl);
  CorpusStore a, b;
  a.ingest_corpus(tmp.file("corpus.jsonl"));
  a.ingest_cases(tmp.file("cases.jsonl"));
  b.ingest_corpus(tmp.file("corpus.jsonl"));
  b.ingest_cases(tmp.file("cases.jsonl"));
  CHECK(a == b);
}

TEST_CASE("ids are compared after NFC normalization and trimming") {
  // "é" as U+00E9 vs "e" + combining acute: same document id after NFC.
  std::string composed = "caf\xC3\xA9";          // café precomposed
  std::string decomposed = "cafe\xCC\x81";       // cafe + U+0301
  CHECK(uni::normalize_key(composed) == uni::normalize_key(" " + decomposed + " "));

  CorpusStore store;
  store.add_document({uni::normalize_key(decomposed), DocKind::Statute, "t", "x"});
  CHECK(store.find_document(uni::normalize_key(composed)) != nullptr);
}

TEST_CASE("evidence set invariants: duplicates and ordering rejected") {
  EvidenceSet ok{"c1", {{"a", 2.0}, {"b", 1.0}}};
  CHECK_NOTHROW(ok.validate());

  EvidenceSet dup{"c1", {{"a", 2.0}, {"a", 1.0}}};
  CHECK_THROWS_AS(dup.validate(), ValidationError);

  EvidenceSet unordered{"c1", {{"a", 1.0}, {"b", 2.0}}};
  CHECK_THROWS_AS(unordered.validate(), ValidationError);
}

TEST_CASE("nfc handles hangul and matches frozen python oracle values") {
  // Expected bytes computed with python unicodedata.normalize("NFC", ...).
  // Hangul: U+1100 U+1161 U+11A8 composes to U+AC01.
  std::string jamo = "\xE1\x84\x80\xE1\x85\xA1\xE1\x86\xA8";
  CHECK(uni::nfc(jamo) == "\xEA\xB0\x81");
  // Angstrom sign U+212B normalizes to U+00C5.
  CHECK(uni::nfc("\xE2\x84\xAB") == "\xC3\x85");
  // Already-NFC CJK stays untouched.
  CHECK(uni::nfc("盗窃罪") == "盗窃罪");
}
