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
#include <random>

#include "jf/fusion.hpp"
#include "jf/util.hpp"

using namespace jf;

namespace {

// Independent naive double loop. Kept structurally different from the
// implementation on purpose.
RankedList naive_rrf(const std::vector<RouteRanking>& routes, double k_rrf, size_t top_n) {
  std::map<std::string, double> scores;
  for (const auto& route : routes) {
    for (size_t rank = 1; rank <= route.ranking.size(); ++rank) {
      scores[route.ranking[rank - 1].doc_id] += route.weight / (k_rrf + double(rank));
    }
  }
  RankedList out;
  for (const auto& [id, s] : scores) out.push_back({id, s});
  std::sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
  });
  if (out.size() > top_n) out.resize(top_n);
  return out;
}

RankedList ids_to_ranking(const std::vector<std::string>& ids) {
  RankedList out;
  double score = static_cast<double>(ids.size());
  for (const auto& id : ids) out.push_back({id, score--});
  return out;
}

}  // namespace

TEST_CASE("single route: rrf preserves the input order") {
  RouteRanking route{"standard", 3.7, ids_to_ranking({"a", "b", "c", "d"})};
  auto fused = fuse_rrf({route}, 60.0, 10);
  REQUIRE(fused.size() == 4);
  CHECK(fused[0].doc_id == "a");
  CHECK(fused[1].doc_id == "b");
  CHECK(fused[2].doc_id == "c");
  CHECK(fused[3].doc_id == "d");
}

TEST_CASE("hand-computed two-route example: A at ranks (1,3), B at (2,1), weights 2/1") {
  RouteRanking agentic{"agentic", 2.0, ids_to_ranking({"A", "B", "x1"})};
  RouteRanking standard{"standard", 1.0, ids_to_ranking({"B", "x2", "A"})};
  auto fused = fuse_rrf({agentic, standard}, 60.0, 10);

  // score(A) = 2/61 + 1/63 = 0.048660...; score(B) = 2/62 + 1/61 = 0.048651...
  const double score_a = 2.0 / 61.0 + 1.0 / 63.0;
  const double score_b = 2.0 / 62.0 + 1.0 / 61.0;
  REQUIRE(score_a > score_b);  // the hand arithmetic itself
  REQUIRE(fused.size() == 4);
  CHECK(fused[0].doc_id == "A");
  CHECK(fused[0].score == doctest::Approx(score_a).epsilon(1e-12));
  CHECK(fused[1].doc_id == "B");
  CHECK(fused[1].score == doctest::Approx(score_b).epsilon(1e-12));
}

TEST_CASE("doc only in the heavier route beats doc only in the lighter route at equal rank") {
  RouteRanking agentic{"agentic", 2.0, ids_to_ranking({"onlyAgent"})};
  RouteRanking standard{"standard", 1.0, ids_to_ranking({"onlyStd"})};
  auto fused = fuse_rrf({agentic, standard}, 60.0, 10);
  REQUIRE(fused.size() == 2);
  CHECK(fused[0].doc_id == "onlyAgent");
}

TEST_CASE("validation: empty routes, bad k_rrf, duplicate ids, bad weights") {
  CHECK_THROWS_AS(fuse_rrf({}, 60.0, 10), ValidationError);
  RouteRanking ok{"standard", 1.0, ids_to_ranking({"a"})};
  CHECK_THROWS_AS(fuse_rrf({ok}, 0.0, 10), ValidationError);
  RouteRanking dup{"standard", 1.0, {{"a", 2.0}, {"a", 1.0}}};
  CHECK_THROWS_AS(fuse_rrf({dup}, 60.0, 10), ValidationError);
  RouteRanking bad_weight{"standard", 0.0, ids_to_ranking({"a"})};
  CHECK_THROWS_AS(fuse_rrf({bad_weight}, 60.0, 10), ValidationError);
}

TEST_CASE("equivalence with the naive implementation on random instances") {
  std::mt19937_64 rng(20260811);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n_routes = 1 + rng() % 10;
    size_t n_docs = 1 + rng() % 200;
    std::vector<RouteRanking> routes;
    for (size_t r = 0; r < n_routes; ++r) {
      std::vector<std::string> ids;
      for (size_t d = 0; d < n_docs; ++d) ids.push_back("d" + std::to_string(d));
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(1 + rng() % n_docs);
      routes.push_back({"route" + std::to_string(r),
                        0.5 + static_cast<double>(rng() % 40) / 10.0, ids_to_ranking(ids)});
    }
    double k_rrf = 1.0 + static_cast<double>(rng() % 100);
    size_t top_n = 1 + rng() % (n_docs + 5);

    auto got = fuse_rrf(routes, k_rrf, top_n);
    auto want = naive_rrf(routes, k_rrf, top_n);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].doc_id == want[i].doc_id);
      CHECK(got[i].score == want[i].score);  // exact
    }
  }
}

TEST_CASE("scaling all weights by a positive constant preserves the order") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RouteRanking> routes;
    size_t n_routes = 2 + rng() % 4;
    for (size_t r = 0; r < n_routes; ++r) {
      std::vector<std::string> ids;
      for (size_t d = 0; d < 30; ++d) ids.push_back("d" + std::to_string(d));
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(5 + rng() % 20);
      routes.push_back({"r" + std::to_string(r), 1.0 + double(rng() % 10), ids_to_ranking(ids)});
    }
    auto base = fuse_rrf(routes, 60.0, 100);
    double c = 0.25 + static_cast<double>(rng() % 16);
    for (auto& route : routes) route.weight *= c;
    auto scaled = fuse_rrf(routes, 60.0, 100);
    REQUIRE(base.size() == scaled.size());
    for (size_t i = 0; i < base.size(); ++i) {
      CHECK(base[i].doc_id == scaled[i].doc_id);
      CHECK(scaled[i].score == doctest::Approx(base[i].score * c).epsilon(1e-12));
    }
  }
}

TEST_CASE("improving a document's rank never lowers its fused score") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> ids;
    for (size_t d = 0; d < 20; ++d) ids.push_back("d" + std::to_string(d));
    std::shuffle(ids.begin(), ids.end(), rng);
    RouteRanking a{"a", 2.0, ids_to_ranking(ids)};
    std::shuffle(ids.begin(), ids.end(), rng);
    RouteRanking b{"b", 1.0, ids_to_ranking(ids)};

    auto fused = fuse_rrf({a, b}, 60.0, 100);
    std::map<std::string, double> before;
    for (const auto& item : fused) before[item.doc_id] = item.score;

    // Promote a random non-first doc one position in route a.
    size_t pos = 1 + rng() % (a.ranking.size() - 1);
    std::string promoted = a.ranking[pos].doc_id;
    std::swap(a.ranking[pos], a.ranking[pos - 1]);
    // Keep scores consistent with the new order.
    a.ranking = ids_to_ranking([&] {
      std::vector<std::string> v;
      for (const auto& item : a.ranking) v.push_back(item.doc_id);
      return v;
    }());

    auto fused2 = fuse_rrf({a, b}, 60.0, 100);
    for (const auto& item : fused2) {
      if (item.doc_id == promoted) {
        CHECK(item.score >= before[promoted]);
      }
    }
  }
}
