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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "jf/corpus.hpp"
#include "jf/exec.hpp"
#include "jf/ranking.hpp"
#include "jf/tokenize.hpp"

namespace jf {

struct SparseIndexStats {
  size_t doc_count = 0;
  double avg_doc_len = 0.0;
  std::unordered_map<std::string, uint32_t> doc_lengths;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// Inverted index over the corpus. Immutable after build; reads are
// concurrent-safe. Scoring loops over candidate documents are the
// OpenMP kernels; ExecPolicy::Serial is the reference path.
class SparseIndex {
 public:
  static SparseIndex build(const CorpusStore& corpus, TokenizerMode mode = TokenizerMode::Auto);

  // Okapi BM25 with the non-negative idf variant
  // ln((N - df + 0.5) / (df + 0.5) + 1).
  RankedList search_bm25(const std::string& query, size_t k, Bm25Params params = {},
                         ExecPolicy policy = ExecPolicy::Parallel) const;

  // Cosine of raw-tf vectors weighted by the smoothed idf
  // ln((1 + N) / (1 + df)) + 1, both sides L2-normalized.
  RankedList search_tfidf(const std::string& query, size_t k,
                          ExecPolicy policy = ExecPolicy::Parallel) const;

  const SparseIndexStats& stats() const { return stats_; }
  TokenizerMode mode() const { return mode_; }
  size_t term_count() const { return postings_.size(); }
  uint32_t term_frequency(const std::string& term, const std::string& doc_id) const;
  size_t document_frequency(const std::string& term) const;

  void save(const std::filesystem::path& path) const;
  static SparseIndex load(const std::filesystem::path& path);

  friend bool operator==(const SparseIndex& a, const SparseIndex& b);

 private:
  struct TermPostings {
    std::unordered_map<uint32_t, uint32_t> tf_by_doc;  // doc ordinal -> tf
  };

  std::vector<std::string> doc_ids_;         // ordinal -> id
  std::vector<uint32_t> doc_len_;            // ordinal -> token count
  std::vector<double> doc_tfidf_norm_;       // ordinal -> L2 norm of tf*idf vector
  std::map<std::string, TermPostings> postings_;
  SparseIndexStats stats_;
  TokenizerMode mode_ = TokenizerMode::Auto;

  double bm25_idf(size_t df) const;
  double tfidf_idf(size_t df) const;
  void recompute_caches();
};

}  // namespace jf
