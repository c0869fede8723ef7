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
#include "jf/agent.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "jf/tokenize.hpp"
#include "jf/unicode.hpp"
#include "jf/util.hpp"

namespace jf {

namespace {

constexpr const char* kPlannerInstruction =
    "You split criminal case facts into focused legal search queries. "
    "Each query targets one legal aspect (offense elements, sentencing factors, "
    "procedural issues). Reply with one query per line and nothing else.";

constexpr const char* kSelectorInstruction =
    "You select the applicable statutes and precedents for a case from a fixed "
    "candidate list. Reply with the chosen candidate ids only, comma or newline "
    "separated. Never invent ids that are not in the list.";

QueryPlan fallback_plan(const std::string& case_id, const std::string& facts,
                        const PlannerOptions& options) {
  QueryPlan plan;
  plan.case_id = case_id;
  plan.facts = facts;
  plan.planner_id = "fallback:window" + std::to_string(options.fallback_window);
  auto sentences = split_sentences(facts);
  if (sentences.empty()) sentences.push_back(std::string(trim(facts)));
  size_t window = std::max<size_t>(1, options.fallback_window);
  for (size_t start = 0; start < sentences.size() && plan.sub_queries.size() < options.m_max;
       start += window) {
    std::string q;
    for (size_t i = start; i < std::min(start + window, sentences.size()); ++i) {
      if (!q.empty()) q += " ";
      q += sentences[i];
    }
    plan.sub_queries.push_back(std::move(q));
  }
  if (plan.sub_queries.empty()) plan.sub_queries.push_back(facts);
  return plan;
}

std::vector<std::string> parse_query_lines(const std::string& text, size_t m_max) {
  std::vector<std::string> queries;
  for (const auto& line : split_lines(text)) {
    if (queries.size() >= m_max) break;
    queries.push_back(line);
  }
  return queries;
}

}  // namespace

QueryPlan plan_queries(const std::string& case_id, const std::string& facts,
                       TextGenClient* client, const PlannerOptions& options) {
  if (trim(facts).empty()) throw ValidationError("plan_queries: facts are empty");
  if (options.m_max < 1) throw ValidationError("m_max must be >= 1");
  if (client == nullptr) return fallback_plan(case_id, facts, options);

  GenerationRequest request;
  request.system_instruction = kPlannerInstruction;
  request.user_content = facts;

  std::vector<std::string> warnings;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<std::string> queries;
    try {
      auto response = client->generate(request);
      queries = parse_query_lines(response.text, options.m_max);
    } catch (const BackendError& e) {
      warnings.push_back(std::string("planner backend error: ") + e.what());
    }
    if (!queries.empty()) {
      QueryPlan plan;
      plan.case_id = case_id;
      plan.facts = facts;
      plan.sub_queries = std::move(queries);
      plan.planner_id = client->backend_id();
      plan.warnings = std::move(warnings);
      return plan;
    }
    warnings.push_back("planner returned no parseable queries (attempt " +
                       std::to_string(attempt + 1) + ")");
  }
  auto plan = fallback_plan(case_id, facts, options);
  plan.warnings = std::move(warnings);
  plan.warnings.push_back("planner output unusable twice; fell back to sentence windows");
  return plan;
}

RerankResult multi_view_recall(const QueryPlan& plan, const Retriever& retriever,
                               PairScorer& scorer, size_t k_per_query,
                               const std::function<std::string(const std::string&)>& doc_text_of) {
  if (plan.sub_queries.empty()) throw ValidationError("multi_view_recall: empty query plan");
  if (k_per_query < 1) throw ValidationError("k_per_query must be >= 1");

  RankedList pool;
  std::unordered_map<std::string, size_t> position;
  for (const auto& query : plan.sub_queries) {
    for (const auto& hit : retriever(query, k_per_query)) {
      auto it = position.find(hit.doc_id);
      if (it == position.end()) {
        position.emplace(hit.doc_id, pool.size());
        pool.push_back(hit);
      } else if (hit.score > pool[it->second].score) {
        pool[it->second].score = hit.score;
      }
    }
  }
  // Deterministic pre-rerank order regardless of arrival interleaving.
  sort_ranked(pool);
  return rerank(pool, plan.facts, scorer, pool.empty() ? 1 : pool.size(), doc_text_of);
}

double query_reward(const std::string& query, const Retriever& retriever,
                    const std::set<std::string>& gold_ids, double alpha) {
  if (gold_ids.empty()) throw ValidationError("query_reward: gold_ids must be non-empty");
  if (alpha < 0 || alpha > 1) throw ValidationError("query_reward: alpha must be in [0,1]");
  constexpr size_t kWindow = 50;
  RankedList ranking = retriever(query, kWindow);
  if (ranking.empty()) return 0.0;

  double mrr = 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < ranking.size() && i < kWindow; ++i) {
    if (gold_ids.count(ranking[i].doc_id)) {
      if (mrr == 0.0) mrr = 1.0 / static_cast<double>(i + 1);
      ++hits;
    }
  }
  double recall50 = static_cast<double>(hits) / static_cast<double>(gold_ids.size());
  return alpha * mrr + (1.0 - alpha) * recall50;
}

namespace {

// Appends the best remaining pool candidates of `kind` until the floor
// is met or the pool runs out.
void backfill_kind(SelectionResult& result, const RankedList& pool, DocKind kind, size_t floor,
                   const DocKindLookup& doc_kind_of) {
  if (floor == 0 || !doc_kind_of) return;
  auto count_kind = [&] {
    size_t n = 0;
    for (const auto& id : result.selected_ids) {
      auto k = doc_kind_of(id);
      if (k && *k == kind) ++n;
    }
    return n;
  };
  size_t have = count_kind();
  if (have >= floor) return;
  std::unordered_set<std::string> chosen(result.selected_ids.begin(), result.selected_ids.end());
  for (const auto& hit : pool) {
    if (have >= floor) break;
    if (chosen.count(hit.doc_id)) continue;
    auto k = doc_kind_of(hit.doc_id);
    if (!k || *k != kind) continue;
    result.selected_ids.push_back(hit.doc_id);
    chosen.insert(hit.doc_id);
    result.backfilled = true;
    ++have;
  }
}

}  // namespace

SelectionResult select_evidence(const RankedList& pool, const std::string& case_id,
                                const std::string& facts, TextGenClient* client,
                                const SelectorOptions& options,
                                const std::function<std::string(const std::string&)>& doc_title_of,
                                const DocKindLookup& doc_kind_of) {
  if (pool.empty()) throw ValidationError("select_evidence: candidate pool is empty");

  SelectionResult result;
  result.case_id = case_id;
  for (const auto& hit : pool) result.pool_ids.push_back(hit.doc_id);
  std::unordered_set<std::string> pool_set(result.pool_ids.begin(), result.pool_ids.end());

  if (client != nullptr) {
    GenerationRequest request;
    request.system_instruction = kSelectorInstruction;
    std::string listing;
    for (const auto& hit : pool) {
      listing += hit.doc_id;
      std::string title = doc_title_of ? doc_title_of(hit.doc_id) : "";
      if (!title.empty()) listing += "\t" + title;
      listing += "\n";
    }
    request.user_content = "Facts:\n" + facts + "\n\nCandidates:\n" + listing;

    for (int attempt = 0; attempt < 2 && result.selected_ids.empty(); ++attempt) {
      std::string text;
      try {
        text = client->generate(request).text;
      } catch (const BackendError& e) {
        result.warnings.push_back(std::string("selector backend error: ") + e.what());
        continue;
      }
      std::unordered_set<std::string> chosen;
      for (auto& piece : split(text, '\n')) {
        for (auto& token : split(piece, ',')) {
          auto id = std::string(trim(token));
          if (id.empty()) continue;
          if (!pool_set.count(id)) {
            result.warnings.push_back("selector chose '" + id + "' which is not in the pool");
            continue;
          }
          if (chosen.insert(id).second) result.selected_ids.push_back(id);
        }
      }
      if (result.selected_ids.empty() && attempt == 0) {
        result.warnings.push_back("selector returned no valid ids; retrying once");
      }
    }
    result.selector_id = client->backend_id();
  }

  if (client == nullptr || (result.selected_ids.empty() && client != nullptr)) {
    if (client != nullptr) {
      result.warnings.push_back("selector unusable; degraded to rank-based selection");
    }
    result.selector_id = "rank-fallback";
    for (const auto& hit : pool) {
      if (result.selected_ids.size() >= options.n_min) break;
      result.selected_ids.push_back(hit.doc_id);
    }
    backfill_kind(result, pool, DocKind::Statute, options.n_min_statutes, doc_kind_of);
    backfill_kind(result, pool, DocKind::Precedent, options.n_min_precedents, doc_kind_of);
    return result;
  }

  // N_min back-fill from the best-ranked unselected pool candidates.
  if (result.selected_ids.size() < options.n_min) {
    std::unordered_set<std::string> have(result.selected_ids.begin(), result.selected_ids.end());
    for (const auto& hit : pool) {
      if (result.selected_ids.size() >= options.n_min) break;
      if (have.count(hit.doc_id)) continue;
      result.selected_ids.push_back(hit.doc_id);
      result.backfilled = true;
    }
  }
  backfill_kind(result, pool, DocKind::Statute, options.n_min_statutes, doc_kind_of);
  backfill_kind(result, pool, DocKind::Precedent, options.n_min_precedents, doc_kind_of);
  return result;
}

double selection_reward(const SelectionResult& selected, const std::set<std::string>& gold_ids,
                        const std::set<std::string>& pool_gold,
                        const SelectionRewardWeights& weights) {
  if (weights.a < 0 || weights.b < 0 || weights.c < 0) {
    throw ValidationError("selection_reward: weights must be nonnegative");
  }
  size_t top5_hits = 0;
  for (size_t i = 0; i < selected.selected_ids.size() && i < 5; ++i) {
    if (gold_ids.count(selected.selected_ids[i])) ++top5_hits;
  }
  double p_at_5 = static_cast<double>(top5_hits) / 5.0;

  size_t pool_gold_hits = 0;
  for (const auto& id : selected.selected_ids) {
    if (pool_gold.count(id)) ++pool_gold_hits;
  }
  double pool_recall = static_cast<double>(pool_gold_hits) /
                       std::max<double>(1.0, static_cast<double>(pool_gold.size()));

  double overage = std::max(
      0.0, static_cast<double>(selected.selected_ids.size()) - static_cast<double>(weights.l_target));
  double reward = weights.a * p_at_5 + weights.b * pool_recall - weights.c * overage;
  return std::clamp(reward, -weights.c * weights.overage_cap, weights.a + weights.b);
}

std::string build_generation_prompt(
    const std::string& facts,
    const std::vector<std::pair<std::string, const LegalDocument*>>& evidence,
    const std::string& instruction) {
  std::string prompt = instruction;
  prompt += "\n\nEvidence:\n";
  if (evidence.empty()) {
    prompt += "(no retrieved evidence)\n";
  } else {
    size_t n = 0;
    for (const auto& [id, doc] : evidence) {
      ++n;
      prompt += std::to_string(n) + ". [" + id + "]";
      if (doc != nullptr) {
        if (!doc->title.empty()) prompt += " " + doc->title;
        prompt += "\n" + doc->text + "\n";
      } else {
        prompt += " (unresolved)\n";
      }
    }
  }
  prompt += "\nFacts:\n" + facts + "\n";
  return prompt;
}

std::string build_generation_prompt(const std::string& facts, const EvidenceSet& evidence,
                                    const CorpusStore& store, const std::string& instruction) {
  evidence.validate();
  std::vector<std::pair<std::string, const LegalDocument*>> resolved;
  resolved.reserve(evidence.items.size());
  for (const auto& item : evidence.items) {
    resolved.emplace_back(item.doc_id, store.find_document(item.doc_id));
  }
  return build_generation_prompt(facts, resolved, instruction);
}

}  // namespace jf
