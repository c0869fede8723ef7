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
#include "jf/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "jf/io.hpp"
#include "jf/util.hpp"

namespace jf {

namespace {

// Query-side term counts in first-seen order for determinism.
std::vector<std::pair<std::string, uint32_t>> query_term_counts(
    const std::vector<std::string>& tokens) {
  std::vector<std::pair<std::string, uint32_t>> counts;
  std::unordered_map<std::string, size_t> pos;
  for (const auto& tok : tokens) {
    auto it = pos.find(tok);
    if (it == pos.end()) {
      pos.emplace(tok, counts.size());
      counts.emplace_back(tok, 1);
    } else {
      ++counts[it->second].second;
    }
  }
  return counts;
}

}  // namespace

SparseIndex SparseIndex::build(const CorpusStore& corpus, TokenizerMode mode) {
  if (corpus.document_count() == 0) {
    throw ValidationError("cannot build a sparse index over an empty corpus");
  }
  SparseIndex index;
  index.mode_ = mode;
  uint64_t total_len = 0;
  for (const auto& doc : corpus.documents()) {
    uint32_t ordinal = static_cast<uint32_t>(index.doc_ids_.size());
    index.doc_ids_.push_back(doc.id);
    auto tokens = tokenize(doc.title + " " + doc.text, mode);
    index.doc_len_.push_back(static_cast<uint32_t>(tokens.size()));
    total_len += tokens.size();
    for (const auto& tok : tokens) {
      ++index.postings_[tok].tf_by_doc[ordinal];
    }
  }
  index.stats_.doc_count = index.doc_ids_.size();
  index.stats_.avg_doc_len =
      index.stats_.doc_count ? static_cast<double>(total_len) / index.stats_.doc_count : 0.0;
  for (size_t i = 0; i < index.doc_ids_.size(); ++i) {
    index.stats_.doc_lengths[index.doc_ids_[i]] = index.doc_len_[i];
  }
  index.recompute_caches();
  return index;
}

double SparseIndex::bm25_idf(size_t df) const {
  const double n = static_cast<double>(stats_.doc_count);
  const double d = static_cast<double>(df);
  return std::log((n - d + 0.5) / (d + 0.5) + 1.0);
}

double SparseIndex::tfidf_idf(size_t df) const {
  const double n = static_cast<double>(stats_.doc_count);
  return std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0;
}

void SparseIndex::recompute_caches() {
  doc_tfidf_norm_.assign(doc_ids_.size(), 0.0);
  for (const auto& [term, post] : postings_) {
    double idf = tfidf_idf(post.tf_by_doc.size());
    for (const auto& [ordinal, tf] : post.tf_by_doc) {
      double w = static_cast<double>(tf) * idf;
      doc_tfidf_norm_[ordinal] += w * w;
    }
  }
  for (auto& v : doc_tfidf_norm_) v = std::sqrt(v);
}

uint32_t SparseIndex::term_frequency(const std::string& term, const std::string& doc_id) const {
  auto it = postings_.find(term);
  if (it == postings_.end()) return 0;
  for (size_t i = 0; i < doc_ids_.size(); ++i) {
    if (doc_ids_[i] == doc_id) {
      auto jt = it->second.tf_by_doc.find(static_cast<uint32_t>(i));
      return jt == it->second.tf_by_doc.end() ? 0 : jt->second;
    }
  }
  return 0;
}

size_t SparseIndex::document_frequency(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? 0 : it->second.tf_by_doc.size();
}

RankedList SparseIndex::search_bm25(const std::string& query, size_t k, Bm25Params params,
                                    ExecPolicy policy) const {
  if (doc_ids_.empty()) throw ValidationError("sparse index is empty (not built)");
  if (k < 1) throw ValidationError("k must be >= 1");
  if (params.k1 <= 0) throw ValidationError("bm25 k1 must be > 0");
  if (params.b < 0 || params.b > 1) throw ValidationError("bm25 b must be in [0,1]");

  auto counts = query_term_counts(tokenize(query, mode_));

  // Matched query terms with their postings and idf.
  struct MatchedTerm {
    const TermPostings* post;
    double idf;
    uint32_t qtf;
  };
  std::vector<MatchedTerm> matched;
  std::vector<uint32_t> candidates;
  {
    std::vector<char> seen(doc_ids_.size(), 0);
    for (const auto& [term, qtf] : counts) {
      auto it = postings_.find(term);
      if (it == postings_.end()) continue;
      matched.push_back({&it->second, bm25_idf(it->second.tf_by_doc.size()), qtf});
      for (const auto& [ordinal, tf] : it->second.tf_by_doc) {
        if (!seen[ordinal]) {
          seen[ordinal] = 1;
          candidates.push_back(ordinal);
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());

  // Per-candidate scoring is the parallel kernel: one output slot per
  // candidate, no shared accumulators.
  std::vector<double> scores(candidates.size(), 0.0);
  parallel_for(policy, candidates.size(), [&](size_t i) {
    uint32_t ordinal = candidates[i];
    double norm = 1.0 - params.b + params.b * doc_len_[ordinal] / stats_.avg_doc_len;
    double score = 0.0;
    for (const auto& mt : matched) {
      auto it = mt.post->tf_by_doc.find(ordinal);
      if (it == mt.post->tf_by_doc.end()) continue;
      double tf = it->second;
      score += mt.qtf * mt.idf * (tf * (params.k1 + 1.0)) / (tf + params.k1 * norm);
    }
    scores[i] = score;
  });

  RankedList out;
  out.reserve(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    out.push_back({doc_ids_[candidates[i]], scores[i]});
  }
  sort_ranked(out);
  truncate_ranked(out, k);
  return out;
}

RankedList SparseIndex::search_tfidf(const std::string& query, size_t k,
                                     ExecPolicy policy) const {
  if (doc_ids_.empty()) throw ValidationError("sparse index is empty (not built)");
  if (k < 1) throw ValidationError("k must be >= 1");

  auto counts = query_term_counts(tokenize(query, mode_));

  struct MatchedTerm {
    const TermPostings* post;
    double idf;
    double query_weight;  // qtf * idf
  };
  std::vector<MatchedTerm> matched;
  std::vector<uint32_t> candidates;
  double query_norm_sq = 0.0;
  {
    std::vector<char> seen(doc_ids_.size(), 0);
    for (const auto& [term, qtf] : counts) {
      auto it = postings_.find(term);
      double idf = tfidf_idf(it == postings_.end() ? 0 : it->second.tf_by_doc.size());
      double qw = static_cast<double>(qtf) * idf;
      query_norm_sq += qw * qw;  // unmatched terms still lengthen the query vector
      if (it == postings_.end()) continue;
      matched.push_back({&it->second, idf, qw});
      for (const auto& [ordinal, tf] : it->second.tf_by_doc) {
        if (!seen[ordinal]) {
          seen[ordinal] = 1;
          candidates.push_back(ordinal);
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  const double query_norm = std::sqrt(query_norm_sq);

  std::vector<double> scores(candidates.size(), 0.0);
  parallel_for(policy, candidates.size(), [&](size_t i) {
    uint32_t ordinal = candidates[i];
    double dot = 0.0;
    for (const auto& mt : matched) {
      auto it = mt.post->tf_by_doc.find(ordinal);
      if (it == mt.post->tf_by_doc.end()) continue;
      dot += mt.query_weight * (static_cast<double>(it->second) * mt.idf);
    }
    double denom = query_norm * doc_tfidf_norm_[ordinal];
    scores[i] = denom > 0 ? dot / denom : 0.0;
  });

  RankedList out;
  out.reserve(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    out.push_back({doc_ids_[candidates[i]], scores[i]});
  }
  sort_ranked(out);
  truncate_ranked(out, k);
  return out;
}

void SparseIndex::save(const std::filesystem::path& path) const {
  io::json root;
  root["magic"] = "JFSPARSE1";
  root["tokenizer"] = to_string(mode_);
  root["doc_ids"] = doc_ids_;
  root["doc_lengths"] = doc_len_;
  io::json terms = io::json::object();
  for (const auto& [term, post] : postings_) {
    // Sorted [ordinal, tf] pairs keep the serialization deterministic.
    std::vector<std::pair<uint32_t, uint32_t>> pairs(post.tf_by_doc.begin(),
                                                     post.tf_by_doc.end());
    std::sort(pairs.begin(), pairs.end());
    terms[term] = pairs;
  }
  root["postings"] = std::move(terms);
  io::atomic_write(path, root.dump() + "\n");
}

SparseIndex SparseIndex::load(const std::filesystem::path& path) {
  io::json root = io::json::parse(io::read_file(path), nullptr, false);
  if (root.is_discarded() || root.value("magic", "") != std::string("JFSPARSE1")) {
    throw IoError("not a JFSPARSE1 index: " + path.string());
  }
  SparseIndex index;
  index.mode_ = tokenizer_mode_from_string(root["tokenizer"].get<std::string>());
  index.doc_ids_ = root["doc_ids"].get<std::vector<std::string>>();
  index.doc_len_ = root["doc_lengths"].get<std::vector<uint32_t>>();
  for (const auto& [term, pairs] : root["postings"].items()) {
    auto& post = index.postings_[term];
    for (const auto& p : pairs) {
      post.tf_by_doc[p[0].get<uint32_t>()] = p[1].get<uint32_t>();
    }
  }
  uint64_t total = 0;
  for (auto len : index.doc_len_) total += len;
  index.stats_.doc_count = index.doc_ids_.size();
  index.stats_.avg_doc_len =
      index.stats_.doc_count ? static_cast<double>(total) / index.stats_.doc_count : 0.0;
  for (size_t i = 0; i < index.doc_ids_.size(); ++i) {
    index.stats_.doc_lengths[index.doc_ids_[i]] = index.doc_len_[i];
  }
  index.recompute_caches();
  return index;
}

bool operator==(const SparseIndex& a, const SparseIndex& b) {
  if (a.doc_ids_ != b.doc_ids_ || a.doc_len_ != b.doc_len_ || a.mode_ != b.mode_) return false;
  if (a.postings_.size() != b.postings_.size()) return false;
  for (const auto& [term, post] : a.postings_) {
    auto it = b.postings_.find(term);
    if (it == b.postings_.end() || it->second.tf_by_doc != post.tf_by_doc) return false;
  }
  return true;
}

}  // namespace jf
