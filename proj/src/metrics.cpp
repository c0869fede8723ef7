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
#include "jf/metrics.hpp"

#include <algorithm>

#include "jf/util.hpp"

namespace jf {

namespace {

size_t hits_in_top_k(const RankedList& ranking, const std::set<std::string>& gold, size_t k) {
  size_t hits = 0;
  for (size_t i = 0; i < ranking.size() && i < k; ++i) {
    hits += gold.count(ranking[i].doc_id);
  }
  return hits;
}

}  // namespace

double precision_at_k(const RankedList& ranking, const std::set<std::string>& gold, size_t k) {
  if (k < 1) throw ValidationError("precision_at_k: k must be >= 1");
  return static_cast<double>(hits_in_top_k(ranking, gold, k)) / static_cast<double>(k);
}

double recall_at_k(const RankedList& ranking, const std::set<std::string>& gold, size_t k) {
  if (k < 1) throw ValidationError("recall_at_k: k must be >= 1");
  if (gold.empty()) throw ValidationError("recall_at_k: gold set is empty");
  return static_cast<double>(hits_in_top_k(ranking, gold, k)) / static_cast<double>(gold.size());
}

double mrr(const RankedList& ranking, const std::set<std::string>& gold) {
  for (size_t i = 0; i < ranking.size(); ++i) {
    if (gold.count(ranking[i].doc_id)) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

Prf set_prf(const std::set<std::string>& pred, const std::set<std::string>& gold) {
  if (pred.empty() && gold.empty()) return {1.0, 1.0, 1.0};
  if (pred.empty() || gold.empty()) return {0.0, 0.0, 0.0};
  size_t hits = 0;
  for (const auto& p : pred) hits += gold.count(p);
  Prf out;
  out.precision = static_cast<double>(hits) / static_cast<double>(pred.size());
  out.recall = static_cast<double>(hits) / static_cast<double>(gold.size());
  out.f1 = (out.precision + out.recall) > 0
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

std::pair<double, double> penalty_accuracy(const JudgmentExtract& cand,
                                           const JudgmentExtract& gold) {
  auto pair_score = [](const std::optional<double>& a, const std::optional<double>& b) {
    if (!a && !b) return 1.0;
    if (!a || !b) return 0.0;
    return numeric_match(*a, *b);
  };
  return {pair_score(cand.prison_months, gold.prison_months),
          pair_score(cand.fine_amount, gold.fine_amount)};
}

SectionScores section_similarity(const JudgmentExtract& cand, const JudgmentExtract& gold,
                                 SimilarityScorer& scorer) {
  auto score = [&](const std::optional<std::string>& c, const std::optional<std::string>& g) {
    if (!c || !g) return 0.0;
    return std::clamp(scorer.similarity(*c, *g), 0.0, 1.0);
  };
  return {score(cand.reasoning_section, gold.reasoning_section),
          score(cand.judgment_section, gold.judgment_section)};
}

RetrievalEvaluator::RetrievalEvaluator(std::vector<size_t> cutoffs)
    : cutoffs_(std::move(cutoffs)) {
  std::sort(cutoffs_.begin(), cutoffs_.end());
  for (size_t k : cutoffs_) {
    report_.per_case["p@" + std::to_string(k)] = {};
    report_.per_case["r@" + std::to_string(k)] = {};
  }
  report_.per_case["mrr"] = {};
}

void RetrievalEvaluator::add_case(const std::string& case_id, const RankedList& ranking,
                                  const std::set<std::string>& gold) {
  if (gold.empty()) {
    report_.notes.push_back("case " + case_id + " skipped: empty gold set");
    return;
  }
  report_.case_ids.push_back(case_id);
  ++report_.case_count;
  gold_sizes_.push_back(gold.size());
  for (size_t k : cutoffs_) {
    report_.per_case["p@" + std::to_string(k)].push_back(precision_at_k(ranking, gold, k));
    report_.per_case["r@" + std::to_string(k)].push_back(recall_at_k(ranking, gold, k));
  }
  report_.per_case["mrr"].push_back(mrr(ranking, gold));
}

MetricReport RetrievalEvaluator::finish() const {
  MetricReport out = report_;
  for (const auto& [metric, values] : out.per_case) {
    double sum = 0.0;
    for (double v : values) sum += v;
    out.macro[metric] = values.empty() ? 0.0 : sum / static_cast<double>(values.size());
  }
  // Micro pooling. Precision and mrr have constant per-case denominators,
  // so their micro values equal macro; recall pools hits over total gold.
  for (const auto& [metric, values] : out.per_case) {
    if (metric.rfind("r@", 0) == 0) {
      double hits = 0.0, total_gold = 0.0;
      for (size_t i = 0; i < values.size(); ++i) {
        hits += values[i] * static_cast<double>(gold_sizes_[i]);
        total_gold += static_cast<double>(gold_sizes_[i]);
      }
      out.micro[metric] = total_gold > 0 ? hits / total_gold : 0.0;
    } else {
      out.micro[metric] = out.macro[metric];
    }
  }
  return out;
}

MetricReport RetrievalEvaluator::evaluate_batch(const std::vector<size_t>& cutoffs,
                                                const std::vector<std::string>& case_ids,
                                                const std::vector<RankedList>& rankings,
                                                const std::vector<std::set<std::string>>& golds) {
  if (case_ids.size() != rankings.size() || case_ids.size() != golds.size()) {
    throw ValidationError("evaluate_batch: input arrays must align");
  }
  RetrievalEvaluator eval(cutoffs);
  for (size_t i = 0; i < case_ids.size(); ++i) {
    eval.add_case(case_ids[i], rankings[i], golds[i]);
  }
  return eval.finish();
}

}  // namespace jf
