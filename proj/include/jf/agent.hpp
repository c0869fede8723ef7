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

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jf/corpus.hpp"
#include "jf/llm.hpp"
#include "jf/ranking.hpp"
#include "jf/rerank.hpp"

namespace jf {

// Retrieval callback: (query, k) -> ranked results. Wraps whichever base
// retriever the route is configured with.
using Retriever = std::function<RankedList(const std::string&, size_t)>;

struct QueryPlan {
  std::string case_id;
  std::string facts;
  std::vector<std::string> sub_queries;
  std::string planner_id;
  std::vector<std::string> warnings;
};

struct SelectionResult {
  std::string case_id;
  std::vector<std::string> selected_ids;  // ordered, unique, subset of pool
  bool backfilled = false;
  std::vector<std::string> pool_ids;
  std::string selector_id;
  std::vector<std::string> warnings;
};

struct PlannerOptions {
  size_t m_max = 5;
  size_t fallback_window = 2;  // sentences per fallback sub-query
};

// Decomposes facts into sub-queries. The client speaks a line-delimited
// protocol: one sub-query per nonempty line. One retry on unparseable
// output, then the deterministic fallback planner (sentence windows).
// Passing client == nullptr selects the fallback directly.
QueryPlan plan_queries(const std::string& case_id, const std::string& facts,
                       TextGenClient* client, const PlannerOptions& options);

// Union of per-sub-query top-k (dedup keeps the best prior score), then
// reranked against the full facts. Pool size is bounded by
// m * k_per_query.
RerankResult multi_view_recall(const QueryPlan& plan, const Retriever& retriever,
                               PairScorer& scorer, size_t k_per_query,
                               const std::function<std::string(const std::string&)>& doc_text_of);

// alpha * MRR + (1 - alpha) * Recall@50 of the retriever's ranking for
// this query against the gold ids. Empty ranking scores 0.
double query_reward(const std::string& query, const Retriever& retriever,
                    const std::set<std::string>& gold_ids, double alpha = 0.5);

struct SelectorOptions {
  size_t n_min = 3;
  // Per-kind floors (0 disables). Statutes and precedents are otherwise
  // treated uniformly; when set, each kind is topped up from the best
  // remaining pool candidates of that kind.
  size_t n_min_statutes = 0;
  size_t n_min_precedents = 0;
};

using DocKindLookup = std::function<std::optional<DocKind>(const std::string&)>;

// Selector chooses ids from the pool (comma/line-delimited protocol).
// Out-of-pool ids are dropped with a warning; a selection shorter than
// n_min is topped up with the best remaining pool candidates. A null
// client degrades to rank-based top-n_min selection, flagged.
// doc_kind_of is only consulted for the per-kind floors.
SelectionResult select_evidence(const RankedList& pool, const std::string& case_id,
                                const std::string& facts, TextGenClient* client,
                                const SelectorOptions& options,
                                const std::function<std::string(const std::string&)>& doc_title_of,
                                const DocKindLookup& doc_kind_of = nullptr);

struct SelectionRewardWeights {
  double a = 0.5;           // early precision
  double b = 0.5;           // pool-recall
  double c = 0.1;           // soft length penalty per excess selection
  size_t l_target = 8;
  double overage_cap = 20;  // clamp floor is -c * overage_cap
};

// a*P@5 + b*(coverage of gold available in the pool) - c*max(0, n - L),
// clamped to [-c*overage_cap, a+b].
double selection_reward(const SelectionResult& selected, const std::set<std::string>& gold_ids,
                        const std::set<std::string>& pool_gold,
                        const SelectionRewardWeights& weights);

// Deterministic prompt: instruction block, numbered evidence block, facts
// block, in that order.
std::string build_generation_prompt(const std::string& facts,
                                    const std::vector<std::pair<std::string, const LegalDocument*>>&
                                        evidence,  // (id, resolved doc)
                                    const std::string& instruction);

// Same, resolving an evidence set against the store (validates the set
// first).
std::string build_generation_prompt(const std::string& facts, const EvidenceSet& evidence,
                                    const CorpusStore& store, const std::string& instruction);

}  // namespace jf
