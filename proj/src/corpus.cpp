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
#include "jf/corpus.hpp"

#include <cmath>
#include <limits>

#include "jf/io.hpp"
#include "jf/unicode.hpp"
#include "jf/util.hpp"

namespace jf {

namespace {

constexpr std::string_view kSnapshotMagic = "JFSTORE1";

std::string require_string(const io::json& rec, const char* field, size_t lineno) {
  if (!rec.contains(field) || !rec[field].is_string()) {
    throw ValidationError("line " + std::to_string(lineno) + ": missing or non-string field '" +
                          field + "'");
  }
  return rec[field].get<std::string>();
}

io::json doc_to_json(const LegalDocument& d) {
  return io::json{{"id", d.id}, {"kind", to_string(d.kind)}, {"title", d.title}, {"text", d.text}};
}

io::json case_to_json(const CaseRecord& c) {
  io::json rec{{"id", c.id},
               {"facts", c.facts},
               {"gold_evidence_ids", c.gold_evidence_ids},
               {"gold_charges", c.gold_charges},
               {"gold_verdict", to_string(c.gold_verdict)},
               {"gold_judgment_text", c.gold_judgment_text}};
  rec["gold_prison_months"] =
      c.gold_prison_months ? io::json(*c.gold_prison_months) : io::json(nullptr);
  rec["gold_fine_amount"] = c.gold_fine_amount ? io::json(*c.gold_fine_amount) : io::json(nullptr);
  return rec;
}

LegalDocument doc_from_json(const io::json& rec, size_t lineno) {
  LegalDocument d;
  d.id = uni::normalize_key(require_string(rec, "id", lineno));
  d.kind = doc_kind_from_string(require_string(rec, "kind", lineno));
  d.title = uni::normalize_key(require_string(rec, "title", lineno));
  d.text = require_string(rec, "text", lineno);
  if (d.id.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty id");
  if (d.text.empty()) {
    throw ValidationError("line " + std::to_string(lineno) + ": empty text for id " + d.id);
  }
  return d;
}

CaseRecord case_from_json(const io::json& rec, size_t lineno) {
  CaseRecord c;
  c.id = uni::normalize_key(require_string(rec, "id", lineno));
  c.facts = require_string(rec, "facts", lineno);
  if (c.id.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty case id");
  if (!rec.contains("gold_evidence_ids") || !rec["gold_evidence_ids"].is_array()) {
    throw ValidationError("line " + std::to_string(lineno) + ": missing gold_evidence_ids array");
  }
  for (const auto& v : rec["gold_evidence_ids"]) {
    c.gold_evidence_ids.insert(uni::normalize_key(v.get<std::string>()));
  }
  if (rec.contains("gold_charges")) {
    for (const auto& v : rec["gold_charges"]) {
      c.gold_charges.insert(uni::normalize_key(v.get<std::string>()));
    }
  }
  auto read_number = [&](const char* field) -> std::optional<double> {
    if (!rec.contains(field) || rec[field].is_null()) return std::nullopt;
    if (!rec[field].is_number()) {
      throw ValidationError("line " + std::to_string(lineno) + ": field '" + field +
                            "' must be a number or null");
    }
    double v = rec[field].get<double>();
    if (v < 0 || !std::isfinite(v)) {
      throw ValidationError("line " + std::to_string(lineno) + ": field '" + field +
                            "' must be nonnegative, got " + format_double(v));
    }
    return v;
  };
  if (auto p = read_number("gold_prison_months")) {
    c.gold_prison_months = static_cast<int64_t>(std::llround(*p));
  }
  c.gold_fine_amount = read_number("gold_fine_amount");
  c.gold_verdict = verdict_from_string(require_string(rec, "gold_verdict", lineno));
  if (c.gold_verdict == Verdict::Unknown) {
    throw ValidationError("line " + std::to_string(lineno) +
                          ": gold_verdict must be conviction or acquittal");
  }
  if (rec.contains("gold_judgment_text")) {
    c.gold_judgment_text = rec["gold_judgment_text"].get<std::string>();
  }
  return c;
}

}  // namespace

DocKind doc_kind_from_string(const std::string& s) {
  if (s == "statute") return DocKind::Statute;
  if (s == "precedent") return DocKind::Precedent;
  throw ValidationError("unknown document kind: '" + s + "' (expected statute|precedent)");
}

std::string to_string(DocKind kind) {
  return kind == DocKind::Statute ? "statute" : "precedent";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "conviction") return Verdict::Conviction;
  if (s == "acquittal") return Verdict::Acquittal;
  if (s == "unknown") return Verdict::Unknown;
  throw ValidationError("unknown verdict: '" + s + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Conviction: return "conviction";
    case Verdict::Acquittal: return "acquittal";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

void EvidenceSet::validate() const {
  std::set<std::string> seen;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& item : items) {
    if (!seen.insert(item.doc_id).second) {
      throw ValidationError("evidence set for case " + case_id + ": duplicate doc id " +
                            item.doc_id);
    }
    if (!std::isfinite(item.score)) {
      throw ValidationError("evidence set for case " + case_id + ": non-finite score for " +
                            item.doc_id);
    }
    if (item.score > prev) {
      throw ValidationError("evidence set for case " + case_id +
                            ": scores not non-increasing at " + item.doc_id);
    }
    prev = item.score;
  }
}

void CorpusStore::add_document(LegalDocument doc) {
  if (doc.id.empty()) throw ValidationError("document with empty id");
  if (doc.text.empty()) throw ValidationError("document " + doc.id + " has empty text");
  if (doc_index_.count(doc.id)) throw ValidationError("duplicate document id: " + doc.id);
  doc_index_.emplace(doc.id, docs_.size());
  docs_.push_back(std::move(doc));
}

void CorpusStore::add_case(CaseRecord rec) {
  if (case_index_.count(rec.id)) throw ValidationError("duplicate case id: " + rec.id);
  for (const auto& gid : rec.gold_evidence_ids) {
    if (!doc_index_.count(gid)) {
      throw ValidationError("case " + rec.id + ": gold evidence id '" + gid +
                            "' not present in corpus");
    }
  }
  if (rec.gold_prison_months && *rec.gold_prison_months < 0) {
    throw ValidationError("case " + rec.id + ": negative prison months");
  }
  if (rec.gold_fine_amount && *rec.gold_fine_amount < 0) {
    throw ValidationError("case " + rec.id + ": negative fine amount");
  }
  case_index_.emplace(rec.id, cases_.size());
  cases_.push_back(std::move(rec));
}

IngestReport CorpusStore::ingest_corpus(const std::filesystem::path& path) {
  IngestReport report;
  io::for_each_jsonl(path, [&](size_t lineno, const io::json& rec) {
    add_document(doc_from_json(rec, lineno));
    ++report.record_count;
  });
  if (report.record_count == 0) {
    report.warnings.push_back("corpus file " + path.string() + " contained no records");
  }
  return report;
}

IngestReport CorpusStore::ingest_cases(const std::filesystem::path& path) {
  IngestReport report;
  io::for_each_jsonl(path, [&](size_t lineno, const io::json& rec) {
    add_case(case_from_json(rec, lineno));
    ++report.record_count;
  });
  if (report.record_count == 0) {
    report.warnings.push_back("case file " + path.string() + " contained no records");
  }
  return report;
}

const LegalDocument* CorpusStore::find_document(const std::string& id) const {
  auto it = doc_index_.find(id);
  return it == doc_index_.end() ? nullptr : &docs_[it->second];
}

const CaseRecord* CorpusStore::find_case(const std::string& id) const {
  auto it = case_index_.find(id);
  return it == case_index_.end() ? nullptr : &cases_[it->second];
}

void CorpusStore::snapshot(const std::filesystem::path& path) const {
  std::string out;
  out += kSnapshotMagic;
  out += '\n';
  std::vector<io::json> records;
  records.reserve(docs_.size() + cases_.size());
  for (const auto& d : docs_) {
    io::json rec = doc_to_json(d);
    rec["record"] = "document";
    records.push_back(std::move(rec));
  }
  for (const auto& c : cases_) {
    io::json rec = case_to_json(c);
    rec["record"] = "case";
    records.push_back(std::move(rec));
  }
  out += io::to_jsonl(records);
  io::atomic_write(path, out);
}

CorpusStore CorpusStore::load_snapshot(const std::filesystem::path& path) {
  std::string content = io::read_file(path);
  auto newline = content.find('\n');
  if (newline == std::string::npos || content.substr(0, newline) != kSnapshotMagic) {
    throw IoError("not a JFSTORE1 snapshot: " + path.string());
  }
  CorpusStore store;
  size_t lineno = 1;
  size_t pos = newline + 1;
  while (pos < content.size()) {
    size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    ++lineno;
    auto line = trim(std::string_view(content).substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    io::json rec = io::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.contains("record")) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed snapshot record");
    }
    if (rec["record"] == "document") {
      store.add_document(doc_from_json(rec, lineno));
    } else if (rec["record"] == "case") {
      store.add_case(case_from_json(rec, lineno));
    } else {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": unknown record type");
    }
  }
  return store;
}

}  // namespace jf
