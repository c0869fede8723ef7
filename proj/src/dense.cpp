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
#include "jf/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "jf/io.hpp"
#include "jf/tokenize.hpp"
#include "jf/util.hpp"

static_assert(std::endian::native == std::endian::little,
              "vector file format assumes a little-endian host");

namespace jf {

namespace {

constexpr char kVecMagic[8] = {'J', 'F', 'V', 'E', 'C', '1', 0, 0};

void put_u32(std::string& out, uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

uint32_t get_u32(const std::string& s, size_t& pos) {
  if (pos + 4 > s.size()) throw IoError("truncated vector file");
  uint32_t v;
  std::memcpy(&v, s.data() + pos, 4);
  pos += 4;
  return v;
}

}  // namespace

HashEmbeddingProvider::HashEmbeddingProvider(size_t dim, std::string salt)
    : dim_(dim), salt_(std::move(salt)) {
  if (dim_ < 1) throw ValidationError("embedding dimension must be >= 1");
}

std::string HashEmbeddingProvider::provider_id() const {
  return "hash:" + std::to_string(dim_) + (salt_.empty() ? "" : ":" + salt_);
}

std::vector<std::vector<float>> HashEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<float> vec(dim_, 0.0f);
    for (const auto& tok : tokenize(text, TokenizerMode::Auto)) {
      uint64_t h = fnv1a64(tok, fnv1a64(salt_));
      // Low bits pick the bucket, next bit the sign (feature hashing).
      size_t bucket = static_cast<size_t>(h % dim_);
      float sign = ((h >> 32) & 1) ? 1.0f : -1.0f;
      vec[bucket] += sign;
    }
    double norm_sq = 0.0;
    for (float v : vec) norm_sq += static_cast<double>(v) * v;
    if (norm_sq > 0) {
      float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
      for (float& v : vec) v *= inv;
    }
    out.push_back(std::move(vec));
  }
  return out;
}

DenseIndex DenseIndex::build(const CorpusStore& corpus, EmbeddingProvider& provider) {
  if (provider.dimension() < 1) throw ValidationError("provider dimension must be >= 1");
  DenseIndex index;
  index.dim_ = provider.dimension();
  index.provider_id_ = provider.provider_id();

  std::vector<std::string> texts;
  texts.reserve(corpus.document_count());
  for (const auto& doc : corpus.documents()) {
    index.doc_ids_.push_back(doc.id);
    texts.push_back(doc.title + " " + doc.text);
  }
  auto vectors = provider.embed(texts);
  if (vectors.size() != texts.size()) {
    throw BackendError("provider " + index.provider_id_ + " returned " +
                       std::to_string(vectors.size()) + " vectors for " +
                       std::to_string(texts.size()) + " inputs");
  }
  index.vectors_.reserve(vectors.size() * index.dim_);
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != index.dim_) {
      throw BackendError("provider " + index.provider_id_ + " returned dimension " +
                         std::to_string(vectors[i].size()) + " for document " +
                         index.doc_ids_[i] + " (declared " + std::to_string(index.dim_) + ")");
    }
    index.vectors_.insert(index.vectors_.end(), vectors[i].begin(), vectors[i].end());
  }
  return index;
}

RankedList DenseIndex::search_vector(const std::vector<float>& query_vec, size_t k,
                                     ExecPolicy policy) const {
  if (doc_ids_.empty()) throw ValidationError("dense index is empty");
  if (query_vec.size() != dim_) {
    throw ValidationError("query vector dimension " + std::to_string(query_vec.size()) +
                          " does not match index dimension " + std::to_string(dim_));
  }
  std::vector<double> scores(doc_ids_.size(), 0.0);
  parallel_for(policy, doc_ids_.size(), [&](size_t i) {
    const float* row = vectors_.data() + i * dim_;
    double dot = 0.0;
    for (size_t d = 0; d < dim_; ++d) {
      dot += static_cast<double>(row[d]) * static_cast<double>(query_vec[d]);
    }
    scores[i] = dot;
  });
  // Select before materializing: only the top k ids get copied out.
  std::vector<uint32_t> order(doc_ids_.size());
  for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  auto better = [&](uint32_t a, uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return doc_ids_[a] < doc_ids_[b];
  };
  size_t keep = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(), better);
  RankedList out;
  out.reserve(keep);
  for (size_t i = 0; i < keep; ++i) out.push_back({doc_ids_[order[i]], scores[order[i]]});
  return out;
}

RankedList DenseIndex::search(const std::string& query, EmbeddingProvider& provider, size_t k,
                              ExecPolicy policy) const {
  if (provider.provider_id() != provider_id_) {
    throw ValidationError("provider mismatch: index built with '" + provider_id_ +
                          "', search uses '" + provider.provider_id() + "'");
  }
  auto vecs = provider.embed({query});
  if (vecs.size() != 1 || vecs[0].size() != dim_) {
    throw BackendError("provider returned a malformed query embedding");
  }
  return search_vector(vecs[0], k, policy);
}

void DenseIndex::save(const std::filesystem::path& path) const {
  std::string out;
  out.append(kVecMagic, sizeof(kVecMagic));
  put_u32(out, static_cast<uint32_t>(dim_));
  put_u32(out, static_cast<uint32_t>(doc_ids_.size()));
  put_u32(out, static_cast<uint32_t>(provider_id_.size()));
  out += provider_id_;
  for (size_t i = 0; i < doc_ids_.size(); ++i) {
    put_u32(out, static_cast<uint32_t>(doc_ids_[i].size()));
    out += doc_ids_[i];
    out.append(reinterpret_cast<const char*>(vectors_.data() + i * dim_), dim_ * sizeof(float));
  }
  io::atomic_write(path, out);
}

DenseIndex DenseIndex::load(const std::filesystem::path& path) {
  std::string content = io::read_file(path);
  if (content.size() < sizeof(kVecMagic) ||
      std::memcmp(content.data(), kVecMagic, sizeof(kVecMagic)) != 0) {
    throw IoError("not a JFVEC1 vector file: " + path.string());
  }
  size_t pos = sizeof(kVecMagic);
  DenseIndex index;
  index.dim_ = get_u32(content, pos);
  uint32_t count = get_u32(content, pos);
  uint32_t pid_len = get_u32(content, pos);
  if (pos + pid_len > content.size()) throw IoError("truncated vector file");
  index.provider_id_ = content.substr(pos, pid_len);
  pos += pid_len;
  index.vectors_.reserve(static_cast<size_t>(count) * index.dim_);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t id_len = get_u32(content, pos);
    if (pos + id_len > content.size()) throw IoError("truncated vector file");
    index.doc_ids_.push_back(content.substr(pos, id_len));
    pos += id_len;
    size_t bytes = index.dim_ * sizeof(float);
    if (pos + bytes > content.size()) throw IoError("truncated vector file");
    size_t off = index.vectors_.size();
    index.vectors_.resize(off + index.dim_);
    std::memcpy(index.vectors_.data() + off, content.data() + pos, bytes);
    pos += bytes;
  }
  return index;
}

uint32_t fold_of_case(const std::string& case_id, uint32_t k_folds) {
  return static_cast<uint32_t>(fnv1a64(case_id) % k_folds);
}

MiningReport mine_triples_kfold(const CorpusStore& corpus, uint32_t k_folds,
                                const std::vector<EmbeddingProvider*>& fold_providers,
                                size_t n_neg, size_t depth, ExecPolicy policy) {
  if (k_folds < 2) throw ValidationError("k_folds must be >= 2");
  if (fold_providers.size() != k_folds) {
    throw ValidationError("expected " + std::to_string(k_folds) + " fold providers, got " +
                          std::to_string(fold_providers.size()));
  }
  if (n_neg < 1) throw ValidationError("n_neg must be >= 1");
  if (depth < n_neg) throw ValidationError("depth must be >= n_neg");

  // One index per fold provider. Each fold's provider stands for the
  // model trained without that fold.
  std::vector<DenseIndex> fold_indexes;
  fold_indexes.reserve(k_folds);
  for (auto* provider : fold_providers) {
    fold_indexes.push_back(DenseIndex::build(corpus, *provider));
  }

  const auto& cases = corpus.cases();

  // Results assembled in case order regardless of scheduling.
  std::vector<MiningReport> per_case(cases.size());
  parallel_for(policy, cases.size(), [&](size_t ci) {
    const auto& rec = cases[ci];
    uint32_t fold = fold_of_case(rec.id, k_folds);
    auto ranking =
        fold_indexes[fold].search(rec.facts, *fold_providers[fold], depth, ExecPolicy::Serial);
    std::vector<std::string> negatives;
    for (const auto& hit : ranking) {
      if (negatives.size() >= n_neg) break;
      if (rec.gold_evidence_ids.count(hit.doc_id)) continue;
      negatives.push_back(hit.doc_id);
    }
    auto& out = per_case[ci];
    if (negatives.size() < n_neg) {
      out.warnings.push_back("case " + rec.id + ": only " + std::to_string(negatives.size()) +
                             " non-positive candidates within depth " + std::to_string(depth));
    }
    for (const auto& pos_id : rec.gold_evidence_ids) {
      MiningTriple triple;
      triple.case_id = rec.id;
      triple.query_text = rec.facts;
      triple.positive_id = pos_id;
      triple.negative_ids = negatives;
      triple.fold_index = fold;
      out.triples.push_back(std::move(triple));
    }
  });

  MiningReport report;
  for (auto& part : per_case) {
    std::move(part.triples.begin(), part.triples.end(), std::back_inserter(report.triples));
    std::move(part.warnings.begin(), part.warnings.end(), std::back_inserter(report.warnings));
  }
  return report;
}

std::string triples_to_jsonl(const std::vector<MiningTriple>& triples) {
  std::vector<io::json> records;
  records.reserve(triples.size());
  for (const auto& t : triples) {
    records.push_back(io::json{{"case_id", t.case_id},
                               {"query_text", t.query_text},
                               {"positive_id", t.positive_id},
                               {"negative_ids", t.negative_ids},
                               {"fold_index", t.fold_index}});
  }
  return io::to_jsonl(records);
}

}  // namespace jf
