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
#include "jf/fixture.hpp"

#include "jf/io.hpp"
#include "jf/util.hpp"

namespace jf {

namespace {

std::string topic_term(size_t topic, size_t k) {
  return "t" + std::to_string(topic) + std::string(1, static_cast<char>('a' + k));
}

std::string gold_doc_id(size_t topic) { return "S" + std::to_string(topic) + "G"; }

std::string variant_doc_id(size_t topic, size_t j) {
  return "S" + std::to_string(topic) + "V" + std::to_string(j);
}

// Every topic term twice: term coverage plus term frequency both favor
// the gold statute inside its own topic.
std::string gold_doc_text(size_t topic, const FixtureSpec& spec) {
  std::string text;
  for (size_t rep = 0; rep < 2; ++rep) {
    for (size_t k = 0; k < spec.terms_per_topic; ++k) {
      text += topic_term(topic, k) + " ";
    }
  }
  text += "criminal liability";
  return text;
}

// Variant j: three consecutive own-topic terms starting at j, plus the
// first three terms of topic (topic + j). The borrowed terms create the
// cross-topic noise the whole-facts query suffers from.
std::string variant_doc_text(size_t topic, size_t j, const FixtureSpec& spec) {
  std::string text;
  for (size_t k = 0; k < 3; ++k) {
    text += topic_term(topic, (j + k) % spec.terms_per_topic) + " ";
  }
  size_t borrowed = (topic + j) % spec.n_topics;
  for (size_t k = 0; k < 3; ++k) {
    text += topic_term(borrowed, k) + " ";
  }
  text += "general provision";
  return text;
}

std::string sentence_for_topic(size_t topic, size_t n_terms, bool strong) {
  std::string s = strong ? "The record establishes in detail " : "The record briefly notes ";
  for (size_t rep = 0; rep < 2; ++rep) {
    for (size_t k = 0; k < n_terms; ++k) {
      s += topic_term(topic, k) + " ";
    }
  }
  s += "conduct by the defendant";
  return s;
}

std::string judgment_text_for(const CaseRecord& rec) {
  std::string text = "<think> reviewed offense elements sentencing range and mitigation ";
  text += "factors for " + rec.id + " </think>\n[REASONING] The following provisions apply: ";
  for (const auto& gid : rec.gold_evidence_ids) {
    text += "[LAW:" + gid + "] ";
  }
  for (const auto& charge : rec.gold_charges) {
    text += "[CHARGE:" + charge + "] ";
  }
  text += "based on the established facts. [/REASONING]\n[JUDGMENT] [VERDICT:conviction] ";
  if (rec.gold_prison_months) {
    text += "[PRISON:" + std::to_string(*rec.gold_prison_months) + "] ";
  }
  if (rec.gold_fine_amount) {
    text += "[FINE:" + std::to_string(static_cast<long long>(*rec.gold_fine_amount)) + "] ";
  }
  text += "so ordered. [/JUDGMENT]";
  return text;
}

}  // namespace

CorpusStore make_fixture_store(const FixtureSpec& spec) {
  if (spec.n_topics < 16) throw ValidationError("fixture needs at least 16 topics");
  CorpusStore store;
  for (size_t topic = 0; topic < spec.n_topics; ++topic) {
    LegalDocument gold;
    gold.id = gold_doc_id(topic);
    gold.kind = DocKind::Statute;
    gold.title = "statute topic " + std::to_string(topic);
    gold.text = gold_doc_text(topic, spec);
    store.add_document(std::move(gold));
    for (size_t j = 1; j <= spec.variants_per_topic; ++j) {
      LegalDocument variant;
      variant.id = variant_doc_id(topic, j);
      variant.kind = DocKind::Statute;
      variant.title = "statute topic " + std::to_string(topic) + " variant " + std::to_string(j);
      variant.text = variant_doc_text(topic, j, spec);
      store.add_document(std::move(variant));
    }
  }

  for (size_t i = 0; i < spec.n_cases; ++i) {
    size_t r = (i * 7) % spec.n_topics;
    size_t s = (r + 11) % spec.n_topics;
    // Adjacent pairs guarantee a bridge variant (own topic + borrowed
    // neighbor both in the case) that outranks golds on the full query.
    size_t strong_a = r, weak_a = (r + 1) % spec.n_topics;
    size_t strong_b = s, weak_b = (s + 1) % spec.n_topics;

    CaseRecord rec;
    rec.id = "case-" + std::to_string(i);
    rec.facts = sentence_for_topic(strong_a, spec.strong_sentence_terms, true) + ". " +
                sentence_for_topic(weak_a, spec.weak_sentence_terms, false) + ". " +
                sentence_for_topic(strong_b, spec.strong_sentence_terms, true) + ". " +
                sentence_for_topic(weak_b, spec.weak_sentence_terms, false) + ".";
    rec.gold_evidence_ids = {gold_doc_id(strong_a), gold_doc_id(weak_a), gold_doc_id(strong_b),
                             gold_doc_id(weak_b)};
    rec.gold_charges = {"offense-" + std::to_string(r)};
    rec.gold_prison_months = static_cast<int64_t>(6 + (i % 5) * 6);
    rec.gold_fine_amount = 1000.0 * static_cast<double>(1 + i % 7);
    rec.gold_verdict = Verdict::Conviction;
    rec.gold_judgment_text = judgment_text_for(rec);
    store.add_case(std::move(rec));
  }
  return store;
}

void write_fixture_files(const std::filesystem::path& dir, const FixtureSpec& spec) {
  CorpusStore store = make_fixture_store(spec);
  std::vector<io::json> docs;
  for (const auto& d : store.documents()) {
    docs.push_back(io::json{
        {"id", d.id}, {"kind", to_string(d.kind)}, {"title", d.title}, {"text", d.text}});
  }
  std::vector<io::json> cases;
  for (const auto& c : store.cases()) {
    io::json rec{{"id", c.id},
                 {"facts", c.facts},
                 {"gold_evidence_ids", c.gold_evidence_ids},
                 {"gold_charges", c.gold_charges},
                 {"gold_verdict", to_string(c.gold_verdict)},
                 {"gold_judgment_text", c.gold_judgment_text}};
    rec["gold_prison_months"] =
        c.gold_prison_months ? io::json(*c.gold_prison_months) : io::json(nullptr);
    rec["gold_fine_amount"] =
        c.gold_fine_amount ? io::json(*c.gold_fine_amount) : io::json(nullptr);
    cases.push_back(std::move(rec));
  }
  io::atomic_write(dir / "corpus.jsonl", io::to_jsonl(docs));
  io::atomic_write(dir / "cases.jsonl", io::to_jsonl(cases));
}

}  // namespace jf
