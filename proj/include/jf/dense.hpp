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
#include <memory>
#include <string>
#include <vector>

#include "jf/corpus.hpp"
#include "jf/exec.hpp"
#include "jf/ranking.hpp"

namespace jf {

// Supplies fixed-dimension embeddings. Implementations must be
// deterministic (same input, same output) unless they document otherwise;
// index/search provider identity is checked via provider_id().
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) = 0;
  virtual size_t dimension() const = 0;
  virtual std::string provider_id() const = 0;
};

// Deterministic hashed bag-of-tokens embedding, L2-normalized. The salt
// makes providers distinguishable, which is how K-fold mining gets K
// distinct retrieval models at desk scale.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  HashEmbeddingProvider(size_t dim, std::string salt = "");
  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override;
  size_t dimension() const override { return dim_; }
  std::string provider_id() const override;

 private:
  size_t dim_;
  std::string salt_;
};

// Exact exhaustive dot-product retrieval. No ANN structures: the scoring
// loop over all documents is the parallel kernel and a brute-force sort
// is its oracle.
class DenseIndex {
 public:
  static DenseIndex build(const CorpusStore& corpus, EmbeddingProvider& provider);

  RankedList search(const std::string& query, EmbeddingProvider& provider, size_t k,
                    ExecPolicy policy = ExecPolicy::Parallel) const;
  RankedList search_vector(const std::vector<float>& query_vec, size_t k,
                           ExecPolicy policy = ExecPolicy::Parallel) const;

  size_t size() const { return doc_ids_.size(); }
  size_t dimension() const { return dim_; }
  const std::string& provider_id() const { return provider_id_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  const float* vector_of(size_t ordinal) const { return vectors_.data() + ordinal * dim_; }

  // Little-endian float32 payload with a JFVEC1 header carrying
  // dimension, count and provider id.
  void save(const std::filesystem::path& path) const;
  static DenseIndex load(const std::filesystem::path& path);

  friend bool operator==(const DenseIndex& a, const DenseIndex& b) {
    return a.dim_ == b.dim_ && a.provider_id_ == b.provider_id_ && a.doc_ids_ == b.doc_ids_ &&
           a.vectors_ == b.vectors_;
  }

 private:
  size_t dim_ = 0;
  std::string provider_id_;
  std::vector<std::string> doc_ids_;
  std::vector<float> vectors_;  // row-major, doc_ids_.size() x dim_
};

// One contrastive training triple: a query, one gold positive, and the
// hard negatives mined for the query's fold.
struct MiningTriple {
  std::string case_id;
  std::string query_text;
  std::string positive_id;
  std::vector<std::string> negative_ids;
  uint32_t fold_index = 0;

  friend bool operator==(const MiningTriple&, const MiningTriple&) = default;
};

struct MiningReport {
  std::vector<MiningTriple> triples;
  std::vector<std::string> warnings;
};

// Fold assignment is fnv1a64(case_id) % K: stable across runs and
// platforms by construction.
uint32_t fold_of_case(const std::string& case_id, uint32_t k_folds);

// Mines static hard negatives per case with the provider designated for
// the case's fold, so negatives for one fold never come from a model
// that saw that fold. Negatives are the first n_neg non-positive results
// of a top-`depth` retrieval; a window exhausted by positives yields a
// short triple plus a warning.
MiningReport mine_triples_kfold(const CorpusStore& corpus, uint32_t k_folds,
                                const std::vector<EmbeddingProvider*>& fold_providers,
                                size_t n_neg, size_t depth,
                                ExecPolicy policy = ExecPolicy::Parallel);

// Triple export, one JSON record per line.
std::string triples_to_jsonl(const std::vector<MiningTriple>& triples);

}  // namespace jf
