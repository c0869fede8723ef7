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

#include <algorithm>
#include <random>
#include <unordered_map>

#include "jf/util.hpp"
#include "jf/dense.hpp"
#include "support/testutil.hpp"

using namespace jf;

namespace {

// Fixed text->vector table; declared deterministic via its id.
class StubProvider : public EmbeddingProvider {
 public:
  StubProvider(std::string id, size_t dim) : id_(std::move(id)), dim_(dim) {}

  void set(const std::string& text, std::vector<float> vec) { table_[text] = std::move(vec); }

  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
    std::vector<std::vector<float>> out;
    for (const auto& t : texts) {
      auto it = table_.find(t);
      if (it == table_.end()) {
        out.push_back(std::vector<float>(dim_, 0.0f));
      } else {
        out.push_back(it->second);
      }
    }
    return out;
  }
  size_t dimension() const override { return dim_; }
  std::string provider_id() const override { return id_; }

 private:
  std::string id_;
  size_t dim_;
  std::unordered_map<std::string, std::vector<float>> table_;
};

// Misbehaving provider: returns one vector too few.
class ShortBatchProvider : public EmbeddingProvider {
 public:
  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override {
    std::vector<std::vector<float>> out;
    for (size_t i = 0; i + 1 < texts.size(); ++i) out.push_back({0.0f, 0.0f});
    return out;
  }
  size_t dimension() const override { return 2; }
  std::string provider_id() const override { return "short-batch"; }
};

CorpusStore n_doc_store(size_t n) {
  CorpusStore store;
  for (size_t i = 0; i < n; ++i) {
    store.add_document({"D" + std::to_string(i), DocKind::Statute, "",
                        "text " + std::to_string(i)});
  }
  return store;
}

RankedList brute_force_dense(const DenseIndex& index, const std::vector<float>& query) {
  RankedList all;
  for (size_t i = 0; i < index.size(); ++i) {
    double dot = 0.0;
    const float* row = index.vector_of(i);
    for (size_t d = 0; d < index.dimension(); ++d) {
      dot += static_cast<double>(row[d]) * query[d];
    }
    all.push_back({index.doc_ids()[i], dot});
  }
  sort_ranked(all);
  return all;
}

}  // namespace

TEST_CASE("build stores one vector per document with provider identity") {
  auto store = n_doc_store(3);
  StubProvider provider("stub4", 4);
  for (const auto& d : store.documents()) {
    provider.set(d.title + " " + d.text, {1.0f, 0.0f, 0.0f, 0.0f});
  }
  auto index = DenseIndex::build(store, provider);
  CHECK(index.size() == 3);
  CHECK(index.dimension() == 4);
  CHECK(index.provider_id() == "stub4");

  auto again = DenseIndex::build(store, provider);
  CHECK(index == again);
}

TEST_CASE("wrong batch shape from the provider is a backend error") {
  auto store = n_doc_store(3);
  ShortBatchProvider provider;
  CHECK_THROWS_AS(DenseIndex::build(store, provider), BackendError);
}

TEST_CASE("orthogonal vectors rank by dot product") {
  CorpusStore store;
  store.add_document({"D1", DocKind::Statute, "", "one"});
  store.add_document({"D2", DocKind::Statute, "", "two"});
  StubProvider provider("stub2", 2);
  provider.set(" one", {1.0f, 0.0f});
  provider.set(" two", {0.0f, 1.0f});
  provider.set("q", {1.0f, 0.0f});
  auto index = DenseIndex::build(store, provider);

  auto result = index.search("q", provider, 10);
  REQUIRE(result.size() == 2);
  CHECK(result[0].doc_id == "D1");
  CHECK(result[0].score == doctest::Approx(1.0));
  CHECK(result[1].doc_id == "D2");
  CHECK(result[1].score == doctest::Approx(0.0));
}

TEST_CASE("query equal to one doc vector with all others orthogonal ranks it first") {
  CorpusStore store;
  for (int i = 0; i < 4; ++i) {
    store.add_document({"D" + std::to_string(i), DocKind::Statute, "", "t" + std::to_string(i)});
  }
  StubProvider provider("onehot", 4);
  for (int i = 0; i < 4; ++i) {
    std::vector<float> v(4, 0.0f);
    v[i] = 1.0f;
    provider.set(" t" + std::to_string(i), v);
  }
  auto index = DenseIndex::build(store, provider);
  auto result = index.search_vector({0.0f, 0.0f, 1.0f, 0.0f}, 4);
  REQUIRE(!result.empty());
  CHECK(result[0].doc_id == "D2");
  CHECK(result[0].score == doctest::Approx(1.0));
}

TEST_CASE("provider mismatch is rejected") {
  auto store = n_doc_store(2);
  StubProvider a("prov-a", 2), b("prov-b", 2);
  auto index = DenseIndex::build(store, a);
  CHECK_THROWS_WITH_AS(index.search("q", b, 5), doctest::Contains("provider mismatch"),
                       ValidationError);
}

TEST_CASE("search equals brute-force argsort on random instances") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    size_t n_docs = 2 + rng() % 30;
    size_t dim = 1 + rng() % 8;
    auto store = n_doc_store(n_docs);
    StubProvider provider("rand", dim);
    for (const auto& d : store.documents()) {
      std::vector<float> v(dim);
      for (auto& x : v) x = static_cast<float>(gauss(rng));
      provider.set(d.title + " " + d.text, v);
    }
    auto index = DenseIndex::build(store, provider);
    std::vector<float> query(dim);
    for (auto& x : query) x = static_cast<float>(gauss(rng));

    auto got = index.search_vector(query, n_docs);
    auto want = brute_force_dense(index, query);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].doc_id == want[i].doc_id);
      CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-12));
    }
  }
}

TEST_CASE("search equals brute force on a 10^4-document instance") {
  auto store = n_doc_store(10000);
  HashEmbeddingProvider provider(8, "big");
  auto index = DenseIndex::build(store, provider);
  auto query_vec = provider.embed({"text 4242"})[0];
  auto got = index.search_vector(query_vec, 50);
  auto want = brute_force_dense(index, query_vec);
  want.resize(50);
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].doc_id == want[i].doc_id);
    CHECK(got[i].score == want[i].score);
  }
}

TEST_CASE("vector file round-trips bit-exactly") {
  test::TempDir tmp("dense");
  auto store = n_doc_store(5);
  HashEmbeddingProvider provider(16, "persist");
  auto index = DenseIndex::build(store, provider);
  index.save(tmp.file("dense.vec"));
  auto loaded = DenseIndex::load(tmp.file("dense.vec"));
  CHECK(loaded == index);

  test::write_text(tmp.file("junk.vec"), "not a vector file");
  CHECK_THROWS_AS(DenseIndex::load(tmp.file("junk.vec")), IoError);
}

TEST_CASE("hash provider is deterministic and salt-distinguishable") {
  HashEmbeddingProvider a(32, "s1"), a2(32, "s1"), b(32, "s2");
  auto va = a.embed({"some legal text"});
  CHECK(va == a2.embed({"some legal text"}));
  CHECK(va != b.embed({"some legal text"}));
  CHECK(a.provider_id() != b.provider_id());
}

TEST_CASE("fold assignment is the documented stable hash") {
  // fnv1a64 is pinned; the fold of a given id must never change.
  CHECK(fold_of_case("case-7", 5) == fnv1a64("case-7") % 5);
  for (int i = 0; i < 20; ++i) {
    auto id = "case-" + std::to_string(i);
    CHECK(fold_of_case(id, 2) == fold_of_case(id, 2));
    CHECK(fold_of_case(id, 2) < 2);
  }
}

namespace {

// Builds a mining scenario with per-fold planted rankings: provider for
// fold f embeds every document orthogonally and gives queries a vector
// that makes the planted ranking for that fold come out of dot-product
// search. Provenance of any mined negative is then readable off the
// planted lists.
struct MiningFixture {
  CorpusStore store;
  std::vector<std::unique_ptr<StubProvider>> providers;
  std::vector<EmbeddingProvider*> raw;
  // fold -> ranking over doc ordinals (ids D0..D{n-1})
  std::vector<std::vector<std::string>> planted;

  MiningFixture(size_t n_docs, size_t n_cases, uint32_t k_folds) {
    store = n_doc_store(n_docs);
    for (size_t c = 0; c < n_cases; ++c) {
      CaseRecord rec;
      rec.id = "case-" + std::to_string(c);
      rec.facts = "facts " + std::to_string(c);
      rec.gold_evidence_ids = {"D" + std::to_string(c % n_docs),
                               "D" + std::to_string((c + 1) % n_docs)};
      rec.gold_verdict = Verdict::Conviction;
      store.add_case(std::move(rec));
    }
    std::mt19937_64 rng(7);
    for (uint32_t f = 0; f < k_folds; ++f) {
      auto provider = std::make_unique<StubProvider>("fold" + std::to_string(f), n_docs);
      // Documents are one-hot; a query vector's components therefore set
      // the retrieval order directly.
      std::vector<std::string> order;
      for (size_t d = 0; d < n_docs; ++d) order.push_back("D" + std::to_string(d));
      std::shuffle(order.begin(), order.end(), rng);
      planted.push_back(order);
      for (size_t d = 0; d < n_docs; ++d) {
        std::vector<float> v(n_docs, 0.0f);
        v[d] = 1.0f;
        const auto* doc = store.find_document("D" + std::to_string(d));
        provider->set(doc->title + " " + doc->text, v);
      }
      // All case queries share the fold's planted ranking.
      for (const auto& rec : store.cases()) {
        std::vector<float> q(n_docs, 0.0f);
        for (size_t rank = 0; rank < order.size(); ++rank) {
          size_t ordinal = std::stoul(order[rank].substr(1));
          q[ordinal] = static_cast<float>(n_docs - rank);
        }
        provider->set(rec.facts, q);
      }
      raw.push_back(provider.get());
      providers.push_back(std::move(provider));
    }
  }
};

}  // namespace

TEST_CASE("k-fold mining: negatives come from the case's fold provider only") {
  MiningFixture fx(12, 10, 2);
  auto report = mine_triples_kfold(fx.store, 2, fx.raw, 3, 8);

  for (const auto& triple : report.triples) {
    uint32_t fold = fold_of_case(triple.case_id, 2);
    CHECK(triple.fold_index == fold);

    // Hand-simulate: first 3 non-positive entries of the fold's planted
    // ranking.
    const auto* rec = fx.store.find_case(triple.case_id);
    std::vector<std::string> expected;
    for (const auto& id : fx.planted[fold]) {
      if (expected.size() >= 3) break;
      if (rec->gold_evidence_ids.count(id)) continue;
      expected.push_back(id);
    }
    CHECK(triple.negative_ids == expected);

    // Positives never appear as negatives.
    for (const auto& neg : triple.negative_ids) {
      CHECK(rec->gold_evidence_ids.count(neg) == 0);
    }
    CHECK(rec->gold_evidence_ids.count(triple.positive_id) == 1);
  }

  // One triple per (case, positive).
  size_t expected_triples = 0;
  for (const auto& rec : fx.store.cases()) expected_triples += rec.gold_evidence_ids.size();
  CHECK(report.triples.size() == expected_triples);
}

TEST_CASE("mining emits short triples plus warnings when positives fill the window") {
  // 3 docs, case holds 2 of them as gold, depth 3 -> only 1 negative.
  MiningFixture fx(3, 1, 2);
  auto report = mine_triples_kfold(fx.store, 2, fx.raw, 2, 3);
  REQUIRE(!report.triples.empty());
  for (const auto& triple : report.triples) {
    CHECK(triple.negative_ids.size() == 1);
  }
  CHECK(report.warnings.size() == 1);
}

TEST_CASE("mining validates parameters") {
  MiningFixture fx(6, 2, 2);
  CHECK_THROWS_AS(mine_triples_kfold(fx.store, 1, {fx.raw[0]}, 2, 4), ValidationError);
  CHECK_THROWS_AS(mine_triples_kfold(fx.store, 2, {fx.raw[0]}, 2, 4), ValidationError);
  CHECK_THROWS_AS(mine_triples_kfold(fx.store, 2, fx.raw, 0, 4), ValidationError);
  CHECK_THROWS_AS(mine_triples_kfold(fx.store, 2, fx.raw, 4, 2), ValidationError);
}

TEST_CASE("triple export is one json record per line") {
  MiningFixture fx(6, 2, 2);
  auto report = mine_triples_kfold(fx.store, 2, fx.raw, 2, 6);
  auto jsonl = triples_to_jsonl(report.triples);
  size_t lines = std::count(jsonl.begin(), jsonl.end(), '\n');
  CHECK(lines == report.triples.size());
  CHECK(jsonl.find("\"query_text\"") != std::string::npos);
  CHECK(jsonl.find("\"fold_index\"") != std::string::npos);
}
