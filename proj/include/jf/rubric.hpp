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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jf/corpus.hpp"

namespace jf {

// Structured entities extracted from a judgment document.
// verdict == Acquittal implies null prison/fine (the parser enforces it).
struct JudgmentExtract {
  std::set<std::string> statute_ids;  // normalized citation strings
  std::set<std::string> charges;
  std::optional<double> prison_months;
  std::optional<double> fine_amount;
  Verdict verdict = Verdict::Unknown;
  std::optional<std::string> reasoning_section;
  std::optional<std::string> judgment_section;
  std::optional<std::string> think_trace;
  std::vector<std::string> diagnostics;
};

// A citation-style pattern: text between prefix and suffix is captured,
// optionally normalized through the numeral table, then formatted
// ("{}" marks the insertion point; empty format keeps the raw capture).
struct CitePattern {
  std::string prefix;
  std::string suffix;
  std::string format;            // e.g. "X{}Y"; "" means identity
  bool numeral_normalize = false;
  size_t max_span = 64;          // bytes scanned before giving up
  std::vector<std::string> stop_markers;  // capture containing one is rejected
};

// A duration/amount pattern: a numeral after prefix, read unit by unit
// (e.g. years then months), each unit scaled into the target measure.
struct NumberPattern {
  std::string prefix;
  std::vector<std::pair<std::string, double>> units;  // (suffix, scale)
  std::string bare_unit_suffix;  // terminal suffix accepted with bare_scale
  double bare_scale = 1.0;       // scale when no unit suffix matches
  std::vector<std::string> skips;  // optional literals consumed after prefix
};

struct SpanPattern {
  std::string open;
  std::string close;  // empty: runs to the next section marker or EOF
};

// Declarative extraction config. Bundled sets cover the synthetic tagged
// grammar and Chinese judgment conventions; custom sets load from JSON.
struct PatternSet {
  std::string name;
  SpanPattern think;
  SpanPattern reasoning;
  SpanPattern judgment;
  std::vector<CitePattern> statutes;
  std::vector<CitePattern> charges;
  std::vector<NumberPattern> prison;  // scaled to months
  std::vector<NumberPattern> fines;   // scaled to base currency units
  std::vector<std::string> acquittal_markers;
  std::vector<std::string> conviction_markers;
  bool chinese_numerals = false;

  static const PatternSet& synthetic();
  static const PatternSet& chinese();
  static PatternSet from_json_file(const std::filesystem::path& path);
  // Resolves "synthetic" | "zh" | a filesystem path.
  static PatternSet resolve(const std::string& spec);
};

// Chinese numeral parsing (supports mixtures of arabic digits and
// 零一二两三四五六七八九十百千万亿). Returns nullopt on empty/invalid.
std::optional<double> parse_cjk_number(const std::string& text);

JudgmentExtract parse_judgment(const std::string& text, const PatternSet& patterns);

// max(0, 1 - |A-B| / max(A, B, 1)). Symmetric; S(0,0) = 1 via the
// denominator floor.
double numeric_match(double a, double b);

// Similarity in [0,1] with similarity(x,x) = 1 for the bundled scorer.
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double similarity(const std::string& candidate, const std::string& reference) = 0;
  virtual std::string scorer_id() const = 0;
};

// Bag-of-tokens F1 overlap; deterministic and exactly reproducible.
class TokenF1Scorer : public SimilarityScorer {
 public:
  double similarity(const std::string& candidate, const std::string& reference) override;
  std::string scorer_id() const override { return "token-f1"; }
};

// Remote embedding-similarity backend: POST {"candidate":...,
// "reference":...}, expect {"score": <real in [0,1]>}. Reports carry the
// scorer id so remote numbers are never confused with the bundled
// deterministic default.
class EndpointSimilarityScorer : public SimilarityScorer {
 public:
  using Transport =
      std::function<std::pair<int, std::string>(const std::string& url, const std::string& body)>;

  explicit EndpointSimilarityScorer(std::string url, Transport transport = nullptr);
  double similarity(const std::string& candidate, const std::string& reference) override;
  std::string scorer_id() const override { return "endpoint:" + url_; }

 private:
  std::string url_;
  Transport transport_;
};

// Resolves "token-f1" or "endpoint:<url>".
std::unique_ptr<SimilarityScorer> make_similarity_scorer(const std::string& spec);

struct LegalSubWeights {
  double statutes = 0.25;
  double charges = 0.25;
  double prison = 0.25;
  double fine = 0.25;
};

// Weighted mean of {F1(statutes), F1(charges), S(prison), S(fine)}.
// A categorical verdict conflict zeroes both numeric components; numeric
// null-vs-null scores 1, null-vs-value 0.
double legal_reward(const JudgmentExtract& cand, const JudgmentExtract& gold,
                    const LegalSubWeights& sub_weights = {});

// Mean of per-section similarities; a missing candidate section
// contributes 0.
double struct_reward(const JudgmentExtract& cand, const JudgmentExtract& gold,
                     SimilarityScorer& scorer);

struct LogicThresholds {
  // Length bands over trace token count: score of the band containing
  // the length. Bands are [bound_i, bound_{i+1}).
  std::vector<std::pair<size_t, double>> len_bands = {
      {0, 0.0}, {32, 0.3}, {128, 0.6}, {1024, 0.3}};
  double s_rep_max = 0.4;
};

// min(1, S_len + S_rep): S_len is the band score of the trace length,
// S_rep = s_rep_max * (distinct trigrams / total trigrams); both 0 for a
// null/too-short trace.
double logic_reward(const std::optional<std::string>& think_trace,
                    const LogicThresholds& thresholds = {});

struct RewardWeights {
  double legal = 0.6;
  double structure = 0.3;
  double logic = 0.1;
};

struct RewardBreakdown {
  double r_legal = 0.0;
  double r_struct = 0.0;
  double r_logic = 0.0;
  double total = 0.0;
  RewardWeights weights;
  std::vector<std::string> diagnostics;
};

struct RubricConfig {
  RewardWeights weights;
  LegalSubWeights sub_weights;
  LogicThresholds logic;
  std::string pattern_set = "synthetic";
};

// Builds the gold extract for a case: entities from the gold labels,
// sections parsed from the gold judgment text.
JudgmentExtract gold_extract(const CaseRecord& gold, const PatternSet& patterns);

// Parses the candidate, scores the three components against the case's
// gold labels, and aggregates per the weighted sum. Never fatal: parse
// gaps end up in diagnostics.
RewardBreakdown total_reward(const std::string& cand_text, const CaseRecord& gold,
                             const RubricConfig& config, SimilarityScorer& scorer);

// Same, with a pre-resolved pattern set (hot loops avoid re-resolution).
RewardBreakdown total_reward(const std::string& cand_text, const CaseRecord& gold,
                             const RubricConfig& config, SimilarityScorer& scorer,
                             const PatternSet& patterns);

}  // namespace jf
