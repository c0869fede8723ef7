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
#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace jf {

enum class DocKind { Statute, Precedent };

DocKind doc_kind_from_string(const std::string& s);
std::string to_string(DocKind kind);

enum class Verdict { Conviction, Acquittal, Unknown };

Verdict verdict_from_string(const std::string& s);
std::string to_string(Verdict v);

// A statute or precedent in the corpus. Ids and titles are stored in
// canonical key form (NFC + trim); text is stored verbatim.
struct LegalDocument {
  std::string id;
  DocKind kind = DocKind::Statute;
  std::string title;
  std::string text;

  friend bool operator==(const LegalDocument&, const LegalDocument&) = default;
};

// A fact description plus its gold labels. Null penalty fields mean "not
// applicable" (e.g. a fine-only sentence has null prison months); 0 is a
// distinct, valid amount.
struct CaseRecord {
  std::string id;
  std::string facts;
  std::set<std::string> gold_evidence_ids;
  std::set<std::string> gold_charges;
  std::optional<int64_t> gold_prison_months;
  std::optional<double> gold_fine_amount;
  Verdict gold_verdict = Verdict::Conviction;
  std::string gold_judgment_text;

  friend bool operator==(const CaseRecord&, const CaseRecord&) = default;
};

struct EvidenceItem {
  std::string doc_id;
  double score = 0.0;

  friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

// Retrieval output for one case; items are unique and ordered
// non-increasing by score.
struct EvidenceSet {
  std::string case_id;
  std::vector<EvidenceItem> items;

  void validate() const;
};

struct IngestReport {
  size_t record_count = 0;
  std::vector<std::string> warnings;
};

// Immutable after ingestion; concurrent reads are safe.
class CorpusStore {
 public:
  // One JSON object per line with fields id, kind, title, text.
  IngestReport ingest_corpus(const std::filesystem::path& path);

  // One JSON object per line with the gold-label fields. Requires the
  // corpus to be ingested first: gold evidence ids must resolve.
  IngestReport ingest_cases(const std::filesystem::path& path);

  const std::vector<LegalDocument>& documents() const { return docs_; }
  const std::vector<CaseRecord>& cases() const { return cases_; }

  const LegalDocument* find_document(const std::string& id) const;
  const CaseRecord* find_case(const std::string& id) const;

  size_t document_count() const { return docs_.size(); }
  size_t case_count() const { return cases_.size(); }

  // Versioned snapshot with magic header JFSTORE1; round-trips
  // record-for-record.
  void snapshot(const std::filesystem::path& path) const;
  static CorpusStore load_snapshot(const std::filesystem::path& path);

  void add_document(LegalDocument doc);  // validates and indexes
  void add_case(CaseRecord rec);         // validates against the corpus

  friend bool operator==(const CorpusStore& a, const CorpusStore& b) {
    return a.docs_ == b.docs_ && a.cases_ == b.cases_;
  }

 private:
  std::vector<LegalDocument> docs_;
  std::vector<CaseRecord> cases_;
  std::unordered_map<std::string, size_t> doc_index_;
  std::unordered_map<std::string, size_t> case_index_;
};

}  // namespace jf
