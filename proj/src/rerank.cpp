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
#include "jf/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <httplib.h>

#include "jf/io.hpp"
#include "jf/tokenize.hpp"
#include "jf/util.hpp"

namespace jf {

double TokenOverlapScorer::score(const std::string& query, const std::string& doc_text) {
  auto q = tokenize(query, TokenizerMode::Auto);
  auto d = tokenize(doc_text, TokenizerMode::Auto);
  if (q.empty() && d.empty()) return 1.0;
  if (q.empty() || d.empty()) return 0.0;
  std::unordered_map<std::string, int64_t> counts;
  for (const auto& t : q) ++counts[t];
  int64_t overlap = 0;
  for (const auto& t : d) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return 2.0 * static_cast<double>(overlap) / static_cast<double>(q.size() + d.size());
}

TableScorer::TableScorer(const std::filesystem::path& table_file) {
  id_ = "stub:" + table_file.filename().string();
  io::for_each_jsonl(table_file, [&](size_t lineno, const io::json& rec) {
    if (!rec.contains("doc_id") || !rec.contains("score")) {
      throw ValidationError(table_file.string() + ":" + std::to_string(lineno) +
                            ": expected doc_id and score fields");
    }
    double score = rec["score"].get<double>();
    std::string doc = rec["doc_id"].get<std::string>();
    if (rec.contains("query")) {
      by_query_doc_[rec["query"].get<std::string>() + "\x1f" + doc] = score;
    } else {
      by_doc_[doc] = score;
    }
  });
}

double TableScorer::score(const std::string& query, const std::string& doc_id) {
  if (auto it = by_query_doc_.find(query + "\x1f" + doc_id); it != by_query_doc_.end()) {
    return it->second;
  }
  if (auto it = by_doc_.find(doc_id); it != by_doc_.end()) return it->second;
  throw BackendError("score table " + id_ + " has no entry for doc '" + doc_id + "'");
}

EndpointPairScorer::EndpointPairScorer(std::string url, Transport transport)
    : url_(std::move(url)), transport_(std::move(transport)) {
  if (url_.empty()) throw ValidationError("scorer endpoint url is empty");
  if (!transport_) {
    transport_ = [](const std::string& url, const std::string& body) {
      auto scheme_end = url.find("://");
      if (scheme_end == std::string::npos) {
        throw BackendError("malformed scorer endpoint url: " + url);
      }
      auto path_start = url.find('/', scheme_end + 3);
      std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
      std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
      httplib::Client client(base);
      client.set_connection_timeout(10);
      client.set_read_timeout(30);
      auto res = client.Post(path, body, "application/json");
      if (!res) throw BackendError("scorer endpoint unreachable: " + httplib::to_string(res.error()));
      return std::make_pair(res->status, res->body);
    };
  }
}

double EndpointPairScorer::score(const std::string& query, const std::string& doc_text) {
  io::json body{{"query", query}, {"doc", doc_text}};
  auto [status, response] = transport_(url_, body.dump());
  if (status != 200) {
    throw BackendError("scorer endpoint returned status " + std::to_string(status));
  }
  io::json parsed = io::json::parse(response, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("score") || !parsed["score"].is_number()) {
    throw BackendError("scorer endpoint returned a malformed score payload");
  }
  double s = parsed["score"].get<double>();
  if (!std::isfinite(s)) throw BackendError("scorer endpoint returned a non-finite score");
  return s;
}

RerankResult rerank(const RankedList& candidates, const std::string& query, PairScorer& scorer,
                    size_t top_m,
                    const std::function<std::string(const std::string&)>& doc_text_of) {
  if (top_m < 1) throw ValidationError("top_m must be >= 1");

  struct Entry {
    size_t prior_rank;
    double score;
    bool failed;
  };
  std::vector<Entry> entries(candidates.size());
  RerankResult result;
  for (size_t i = 0; i < candidates.size(); ++i) {
    entries[i].prior_rank = i;
    try {
      double s = scorer.score(query, doc_text_of(candidates[i].doc_id));
      if (!std::isfinite(s)) throw BackendError("non-finite score");
      entries[i].score = s;
      entries[i].failed = false;
    } catch (const std::exception& e) {
      entries[i].score = 0.0;
      entries[i].failed = true;
      result.warnings.push_back("scorer " + scorer.scorer_id() + " failed on " +
                                candidates[i].doc_id + ": " + e.what());
    }
  }
  // Failed pairs sink to the tail; stable sort keeps prior order on ties.
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.failed != b.failed) return !a.failed;
    if (a.failed) return false;
    return a.score > b.score;
  });
  for (const auto& e : entries) {
    if (result.ranking.size() >= top_m) break;
    result.ranking.push_back({candidates[e.prior_rank].doc_id, e.failed ? 0.0 : e.score});
  }
  return result;
}

}  // namespace jf
