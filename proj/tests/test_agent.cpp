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

#include <map>

#include "jf/util.hpp"
#include "jf/agent.hpp"
#include "support/testutil.hpp"

using namespace jf;

namespace {

// Canned planner/selector with scripted responses, no file needed.
class ScriptedClient : public TextGenClient {
 public:
  explicit ScriptedClient(std::vector<std::string> responses)
      : responses_(std::move(responses)) {}
  GenerationResponse generate(const GenerationRequest&) override {
    if (next_ >= responses_.size()) throw BackendError("script exhausted");
    return {responses_[next_++], 0, backend_id()};
  }
  std::string backend_id() const override { return "scripted"; }
  size_t calls() const { return next_; }

 private:
  std::vector<std::string> responses_;
  size_t next_ = 0;
};

// Planted per-query rankings.
class PlantedRetriever {
 public:
  void plant(const std::string& query, RankedList ranking) {
    table_[query] = std::move(ranking);
  }
  Retriever fn() {
    return [this](const std::string& q, size_t k) {
      auto it = table_.find(q);
      RankedList out = it == table_.end() ? RankedList{} : it->second;
      truncate_ranked(out, k);
      return out;
    };
  }

 private:
  std::map<std::string, RankedList> table_;
};

class PriorScoreScorer : public PairScorer {
 public:
  explicit PriorScoreScorer(std::map<std::string, double> scores)
      : scores_(std::move(scores)) {}
  double score(const std::string&, const std::string& doc_id) override {
    return scores_.at(doc_id);
  }
  std::string scorer_id() const override { return "planted"; }

 private:
  std::map<std::string, double> scores_;
};

std::string id_text(const std::string& id) { return id; }

}  // namespace

TEST_CASE("stub planner lines become the query plan verbatim") {
  ScriptedClient client({"query one\nquery two\nquery three\n"});
  auto plan = plan_queries("c1", "some facts", &client, {5, 2});
  CHECK(plan.planner_id == "scripted");
  CHECK(plan.sub_queries ==
        std::vector<std::string>{"query one", "query two", "query three"});
  CHECK(plan.warnings.empty());
}

TEST_CASE("planner output is capped at m_max") {
  ScriptedClient client({"a\nb\nc\nd\ne\nf\ng\n"});
  auto plan = plan_queries("c1", "facts", &client, {3, 2});
  CHECK(plan.sub_queries.size() == 3);
}

TEST_CASE("unparseable planner output twice falls back to sentence windows") {
  ScriptedClient client({"\n\n", "   "});
  auto plan = plan_queries("c1", "First part. Second part. Third part. Fourth part.", &client,
                           {5, 2});
  CHECK(plan.planner_id == "fallback:window2");
  REQUIRE(plan.sub_queries.size() == 2);  // 4 sentences, window 2
  CHECK(plan.sub_queries[0] == "First part Second part");
  CHECK(plan.sub_queries[1] == "Third part Fourth part");
  CHECK(plan.warnings.size() >= 2);
  CHECK(client.calls() == 2);  // one retry happened
}

TEST_CASE("null planner goes straight to the fallback") {
  auto plan = plan_queries("c1", "Alpha. Beta. Gamma.", nullptr, {5, 1});
  CHECK(plan.planner_id == "fallback:window1");
  CHECK(plan.sub_queries == std::vector<std::string>{"Alpha", "Beta", "Gamma"});
}

TEST_CASE("empty facts are rejected") {
  CHECK_THROWS_AS(plan_queries("c1", "   ", nullptr, {5, 2}), ValidationError);
}

TEST_CASE("multi_view_recall unions, dedups, and reranks against the facts") {
  PlantedRetriever retriever;
  retriever.plant("q1", {{"A", 0.9}, {"B", 0.8}});
  retriever.plant("q2", {{"C", 0.7}});
  QueryPlan plan{"c1", "full facts", {"q1", "q2"}, "test", {}};

  PriorScoreScorer scorer({{"A", 0.1}, {"B", 0.9}, {"C", 0.5}});
  auto result = multi_view_recall(plan, retriever.fn(), scorer, 10, id_text);
  std::vector<std::string> order;
  for (const auto& item : result.ranking) order.push_back(item.doc_id);
  CHECK(order == std::vector<std::string>{"B", "C", "A"});  // planted rerank oracle
}

TEST_CASE("multi_view_recall keeps one copy of a doc retrieved by two queries") {
  PlantedRetriever retriever;
  retriever.plant("q1", {{"A", 0.5}});
  retriever.plant("q2", {{"A", 0.9}});
  QueryPlan plan{"c1", "facts", {"q1", "q2"}, "test", {}};
  PriorScoreScorer scorer({{"A", 1.0}});
  auto result = multi_view_recall(plan, retriever.fn(), scorer, 10, id_text);
  REQUIRE(result.ranking.size() == 1);
  CHECK(result.ranking[0].doc_id == "A");
}

TEST_CASE("pool equals the deduplicated union of per-query top-k") {
  PlantedRetriever retriever;
  retriever.plant("q1", {{"A", 3.0}, {"B", 2.0}, {"C", 1.0}});
  retriever.plant("q2", {{"C", 9.0}, {"D", 8.0}});
  QueryPlan plan{"c1", "facts", {"q1", "q2"}, "test", {}};
  PriorScoreScorer scorer({{"A", 0.4}, {"B", 0.3}, {"C", 0.2}, {"D", 0.1}});

  // k_per_query = 2 trims each planted list before the union.
  auto result = multi_view_recall(plan, retriever.fn(), scorer, 2, id_text);
  std::set<std::string> ids;
  for (const auto& item : result.ranking) ids.insert(item.doc_id);
  CHECK(ids == std::set<std::string>{"A", "B", "C", "D"});
  CHECK(result.ranking.size() <= 2 * 2);
}

TEST_CASE("query_reward composes MRR and Recall@50") {
  PlantedRetriever retriever;

  SUBCASE("perfect: rank-1 hit and full gold coverage") {
    retriever.plant("q", {{"g1", 1.0}, {"g2", 0.9}});
    CHECK(query_reward("q", retriever.fn(), {"g1", "g2"}, 0.5) == doctest::Approx(1.0));
  }

  SUBCASE("nothing retrieved in the window") {
    RankedList misses;
    for (int i = 0; i < 60; ++i) misses.push_back({"x" + std::to_string(i), 1.0 - i * 0.01});
    retriever.plant("q", misses);
    CHECK(query_reward("q", retriever.fn(), {"g1"}, 0.5) == doctest::Approx(0.0));
  }

  SUBCASE("hand-computed mixed case: g1 at rank 4, g2 at rank 60") {
    RankedList ranking;
    for (int i = 0; i < 70; ++i) ranking.push_back({"x" + std::to_string(i), 100.0 - i});
    ranking[3] = {"g1", ranking[3].score};
    ranking[59] = {"g2", ranking[59].score};
    retriever.plant("q", ranking);
    // MRR = 1/4, Recall@50 = 1/2, alpha = 0.5 -> 0.375
    CHECK(query_reward("q", retriever.fn(), {"g1", "g2"}, 0.5) == doctest::Approx(0.375));
  }

  SUBCASE("empty ranking scores zero") {
    retriever.plant("q", {});
    CHECK(query_reward("q", retriever.fn(), {"g1"}, 0.5) == doctest::Approx(0.0));
  }

  CHECK_THROWS_AS(query_reward("q", retriever.fn(), {}, 0.5), ValidationError);
}

TEST_CASE("select_evidence applies the back-fill rule") {
  RankedList pool = {{"L1", 0.9}, {"L2", 0.8}, {"L7", 0.7}, {"L9", 0.6}};

  SUBCASE("selector picks two, n_min 3: best unselected candidate appended") {
    ScriptedClient client({"L2, L7"});
    auto result = select_evidence(pool, "c1", "facts", &client, {3}, nullptr);
    CHECK(result.selected_ids == std::vector<std::string>{"L2", "L7", "L1"});
    CHECK(result.backfilled);
  }

  SUBCASE("selector picks enough: unchanged, not backfilled") {
    ScriptedClient client({"L1\nL2\nL7\nL9"});
    auto result = select_evidence(pool, "c1", "facts", &client, {3}, nullptr);
    CHECK(result.selected_ids == std::vector<std::string>{"L1", "L2", "L7", "L9"});
    CHECK_FALSE(result.backfilled);
  }

  SUBCASE("out-of-pool ids are dropped with a warning") {
    ScriptedClient client({"L2, HALLUCINATED, L7, L9"});
    auto result = select_evidence(pool, "c1", "facts", &client, {3}, nullptr);
    CHECK(result.selected_ids == std::vector<std::string>{"L2", "L7", "L9"});
    bool warned = false;
    for (const auto& w : result.warnings) {
      if (w.find("HALLUCINATED") != std::string::npos) warned = true;
    }
    CHECK(warned);
  }

  SUBCASE("null selector degrades to rank-based top-n_min, flagged") {
    auto result = select_evidence(pool, "c1", "facts", nullptr, {3}, nullptr);
    CHECK(result.selector_id == "rank-fallback");
    CHECK(result.selected_ids == std::vector<std::string>{"L1", "L2", "L7"});
  }

  SUBCASE("selection containment and back-fill floor invariants") {
    ScriptedClient client({"L9"});
    auto result = select_evidence(pool, "c1", "facts", &client, {3}, nullptr);
    CHECK(result.selected_ids.size() >= std::min<size_t>(3, pool.size()));
    for (const auto& id : result.selected_ids) {
      CHECK(std::find(result.pool_ids.begin(), result.pool_ids.end(), id) !=
            result.pool_ids.end());
    }
  }
}

TEST_CASE("per-kind floors top up each kind from the pool") {
  RankedList pool = {{"S1", 0.9}, {"P1", 0.8}, {"S2", 0.7}, {"P2", 0.6}, {"S3", 0.5}};
  DocKindLookup kind_of = [](const std::string& id) -> std::optional<DocKind> {
    return id[0] == 'S' ? DocKind::Statute : DocKind::Precedent;
  };
  ScriptedClient client({"S1, S2, S3"});
  SelectorOptions options;
  options.n_min = 2;
  options.n_min_precedents = 1;
  auto result = select_evidence(pool, "c1", "f", &client, options, nullptr, kind_of);
  // Selector picked only statutes; the precedent floor pulls in P1.
  CHECK(result.selected_ids == std::vector<std::string>{"S1", "S2", "S3", "P1"});
  CHECK(result.backfilled);

  // Floors are ignored without a kind lookup.
  ScriptedClient client2({"S1, S2, S3"});
  auto plain = select_evidence(pool, "c1", "f", &client2, options, nullptr, nullptr);
  CHECK(plain.selected_ids == std::vector<std::string>{"S1", "S2", "S3"});
}

TEST_CASE("selection_reward arithmetic") {
  SelectionRewardWeights weights;

  SUBCASE("maximal: top-5 all gold, full pool coverage, within target") {
    weights = {0.5, 0.5, 0.1, 8, 20};
    SelectionResult sel;
    sel.selected_ids = {"g1", "g2", "g3", "g4", "g5"};
    std::set<std::string> gold = {"g1", "g2", "g3", "g4", "g5"};
    CHECK(selection_reward(sel, gold, gold, weights) == doctest::Approx(1.0));
  }

  SUBCASE("empty pool gold: recall term guarded to zero") {
    weights = {0.5, 0.5, 0.1, 8, 20};
    SelectionResult sel;
    sel.selected_ids = {"x1", "x2"};
    CHECK(selection_reward(sel, {"g"}, {}, weights) == doctest::Approx(0.0));
  }

  SUBCASE("worked example: 0.5*0.6 + 0.5*0.8 - 0.05*1 = 0.65") {
    weights = {0.5, 0.5, 0.05, 5, 20};
    SelectionResult sel;
    // 6 selected; 3 of the first 5 are gold; 4 of 5 pool-gold covered.
    sel.selected_ids = {"g1", "g2", "g3", "x1", "x2", "g4"};
    std::set<std::string> gold = {"g1", "g2", "g3", "g4", "g5"};
    std::set<std::string> pool_gold = {"g1", "g2", "g3", "g4", "g5"};
    CHECK(selection_reward(sel, gold, pool_gold, weights) == doctest::Approx(0.65));
  }

  SUBCASE("clamped below at -c * overage_cap") {
    weights = {0.0, 0.0, 1.0, 0, 3};
    SelectionResult sel;
    for (int i = 0; i < 50; ++i) sel.selected_ids.push_back("x" + std::to_string(i));
    CHECK(selection_reward(sel, {"g"}, {"g"}, weights) == doctest::Approx(-3.0));
  }
}

TEST_CASE("generation prompt is deterministic with ordered blocks") {
  LegalDocument doc1{"L1", DocKind::Statute, "theft article", "whoever steals"};
  LegalDocument doc2{"L2", DocKind::Statute, "fine article", "shall be fined"};
  std::vector<std::pair<std::string, const LegalDocument*>> evidence = {{"L1", &doc1},
                                                                        {"L2", &doc2}};
  auto prompt = build_generation_prompt("the facts", evidence, "INSTRUCTION");
  CHECK(prompt.find("INSTRUCTION") == 0);
  CHECK(prompt.find("1. [L1] theft article") != std::string::npos);
  CHECK(prompt.find("2. [L2] fine article") != std::string::npos);
  CHECK(prompt.find("Facts:\nthe facts") != std::string::npos);
  // Evidence precedes facts; instruction precedes evidence.
  CHECK(prompt.find("1. [L1]") < prompt.find("Facts:"));

  CHECK(build_generation_prompt("f", {}, "I").find("(no retrieved evidence)") !=
        std::string::npos);
  CHECK(build_generation_prompt("the facts", evidence, "INSTRUCTION") == prompt);
}

TEST_CASE("evidence-set overload validates and resolves against the store") {
  CorpusStore store;
  store.add_document({"L1", DocKind::Statute, "theft article", "whoever steals"});
  store.add_document({"L2", DocKind::Statute, "fine article", "shall be fined"});

  EvidenceSet evidence{"c1", {{"L1", 2.0}, {"L2", 1.0}}};
  auto prompt = build_generation_prompt("facts", evidence, store, "INSTRUCTION");
  CHECK(prompt.find("1. [L1] theft article") != std::string::npos);
  CHECK(prompt.find("2. [L2] fine article") != std::string::npos);

  EvidenceSet bad{"c1", {{"L1", 1.0}, {"L1", 0.5}}};
  CHECK_THROWS_AS(build_generation_prompt("facts", bad, store, "I"), ValidationError);
}
