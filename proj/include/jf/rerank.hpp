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
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "jf/ranking.hpp"

namespace jf {

// Pairwise query/document relevance. Deterministic for a given scorer_id
// unless documented otherwise; score() may throw BackendError, which
// rerank() degrades on rather than aborting.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual double score(const std::string& query, const std::string& doc_text) = 0;
  virtual std::string scorer_id() const = 0;
};

// Bag-of-tokens overlap F1 between query and document. The bundled
// deterministic default; also serves as the similarity scorer stand-in
// elsewhere.
class TokenOverlapScorer : public PairScorer {
 public:
  double score(const std::string& query, const std::string& doc_text) override;
  std::string scorer_id() const override { return "overlap"; }
};

// Lookup scorer for tests; file format is JSONL records
// {"doc_id": ..., "score": ...} with an optional "query" field. A missing
// entry throws, which exercises the degradation path.
class TableScorer : public PairScorer {
 public:
  explicit TableScorer(const std::filesystem::path& table_file);
  // doc_text passed to score() must be the doc id for table lookup.
  double score(const std::string& query, const std::string& doc_id) override;
  std::string scorer_id() const override { return id_; }

 private:
  std::string id_;
  std::unordered_map<std::string, double> by_doc_;
  std::unordered_map<std::string, double> by_query_doc_;
};

// Remote pairwise scoring service: POST {"query":..., "doc":...} to the
// endpoint, expecting {"score": <real>} back. Transport is injectable
// for tests; failures surface as BackendError, which rerank() degrades
// on per pair.
class EndpointPairScorer : public PairScorer {
 public:
  using Transport =
      std::function<std::pair<int, std::string>(const std::string& url, const std::string& body)>;

  explicit EndpointPairScorer(std::string url, Transport transport = nullptr);
  double score(const std::string& query, const std::string& doc_text) override;
  std::string scorer_id() const override { return "endpoint:" + url_; }

 private:
  std::string url_;
  Transport transport_;
};

struct RerankResult {
  RankedList ranking;
  std::vector<std::string> warnings;  // one per failed pair
};

// Returns the candidate set reordered by scorer score (descending, ties
// by prior rank) and truncated to top_m. Pairs the scorer fails on keep
// their relative prior order at the tail. doc_text_of maps candidate ids
// to the text handed to the scorer.
RerankResult rerank(const RankedList& candidates, const std::string& query, PairScorer& scorer,
                    size_t top_m,
                    const std::function<std::string(const std::string&)>& doc_text_of);

}  // namespace jf
