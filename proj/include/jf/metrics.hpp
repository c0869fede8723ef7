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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jf/ranking.hpp"
#include "jf/rubric.hpp"

namespace jf {

// Precision: hits in the top k over k (short rankings keep denominator
// k). Recall: hits in the top k over |gold|; callers skip cases with
// empty gold.
double precision_at_k(const RankedList& ranking, const std::set<std::string>& gold, size_t k);
double recall_at_k(const RankedList& ranking, const std::set<std::string>& gold, size_t k);

// Reciprocal rank of the first gold hit, 0 if none retrieved.
double mrr(const RankedList& ranking, const std::set<std::string>& gold);

struct Prf {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

// Set P/R/F1. Conventions: empty-vs-empty is (1,1,1); an empty side
// against a non-empty one is (0,0,0).
Prf set_prf(const std::set<std::string>& pred, const std::set<std::string>& gold);

// Per-case matching scores on prison months and fine amount, with the
// rubric's null rules (null-null 1, null-value 0).
std::pair<double, double> penalty_accuracy(const JudgmentExtract& cand,
                                           const JudgmentExtract& gold);

struct SectionScores {
  double reasoning = 0.0;
  double judgment = 0.0;
};

// Per-section similarity via the pluggable scorer; a missing section on
// either side scores 0 for that section.
SectionScores section_similarity(const JudgmentExtract& cand, const JudgmentExtract& gold,
                                 SimilarityScorer& scorer);

// Per-case metric rows plus averages. macro holds arithmetic means of
// per-case values (the default reporting mode); micro pools hit counts
// over summed denominators, which only differs from macro where the
// per-case denominator varies (recall). Reports record the scorer id so
// numbers are never mistaken for results produced with other similarity
// backends.
struct MetricReport {
  std::vector<std::string> case_ids;
  std::map<std::string, std::vector<double>> per_case;  // metric -> aligned values
  std::map<std::string, double> macro;
  std::map<std::string, double> micro;
  size_t case_count = 0;
  std::vector<std::string> notes;
  std::string config_echo;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Streaming accumulator; the batch path below must agree exactly (same
// accumulation order), which the eval commands assert.
class RetrievalEvaluator {
 public:
  explicit RetrievalEvaluator(std::vector<size_t> cutoffs);

  // Cases with empty gold are recorded as skipped notes.
  void add_case(const std::string& case_id, const RankedList& ranking,
                const std::set<std::string>& gold);
  MetricReport finish() const;

  static MetricReport evaluate_batch(const std::vector<size_t>& cutoffs,
                                     const std::vector<std::string>& case_ids,
                                     const std::vector<RankedList>& rankings,
                                     const std::vector<std::set<std::string>>& golds);

 private:
  std::vector<size_t> cutoffs_;
  MetricReport report_;
  std::vector<size_t> gold_sizes_;
};

}  // namespace jf
