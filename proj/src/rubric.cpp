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
#include "jf/rubric.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>

#include "jf/io.hpp"
#include "jf/tokenize.hpp"
#include "jf/unicode.hpp"
#include "jf/util.hpp"

namespace jf {

namespace {

// Code point values for the numeral scanner. Units compose inside one
// number (五千元 reads as 5000 then the 元 suffix).
struct NumeralInfo {
  double value;
  enum Kind { Digit, SmallUnit, BigUnit } kind;
};

std::optional<NumeralInfo> numeral_info(uint32_t cp) {
  switch (cp) {
    case 0x96F6: case 0x3007: return NumeralInfo{0, NumeralInfo::Digit};   // 零 〇
    case 0x4E00: return NumeralInfo{1, NumeralInfo::Digit};                // 一
    case 0x4E8C: case 0x4E24: return NumeralInfo{2, NumeralInfo::Digit};   // 二 两
    case 0x4E09: return NumeralInfo{3, NumeralInfo::Digit};                // 三
    case 0x56DB: return NumeralInfo{4, NumeralInfo::Digit};                // 四
    case 0x4E94: return NumeralInfo{5, NumeralInfo::Digit};                // 五
    case 0x516D: return NumeralInfo{6, NumeralInfo::Digit};                // 六
    case 0x4E03: return NumeralInfo{7, NumeralInfo::Digit};                // 七
    case 0x516B: return NumeralInfo{8, NumeralInfo::Digit};                // 八
    case 0x4E5D: return NumeralInfo{9, NumeralInfo::Digit};                // 九
    case 0x5341: return NumeralInfo{10, NumeralInfo::SmallUnit};           // 十
    case 0x767E: return NumeralInfo{100, NumeralInfo::SmallUnit};          // 百
    case 0x5343: return NumeralInfo{1000, NumeralInfo::SmallUnit};         // 千
    case 0x4E07: return NumeralInfo{10000, NumeralInfo::BigUnit};          // 万
    case 0x4EBF: return NumeralInfo{100000000, NumeralInfo::BigUnit};      // 亿
    default: return std::nullopt;
  }
}

bool is_numeral_cp(uint32_t cp) {
  if ((cp >= '0' && cp <= '9') || cp == '.' || cp == ',') return true;
  if (cp >= 0xFF10 && cp <= 0xFF19) return true;  // fullwidth digits
  return numeral_info(cp).has_value();
}

// F1 between sets with the empty-vs-empty = 1 convention (kept in sync
// with eval metric set_prf, which the metrics tests pin).
double set_f1(const std::set<std::string>& pred, const std::set<std::string>& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  size_t hits = 0;
  for (const auto& p : pred) hits += gold.count(p);
  if (hits == 0) return 0.0;
  double precision = static_cast<double>(hits) / static_cast<double>(pred.size());
  double recall = static_cast<double>(hits) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

double numeric_pair(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a && !b) return 1.0;
  if (!a || !b) return 0.0;
  return numeric_match(*a, *b);
}

// Scans a maximal numeral run starting at byte `pos`; returns the parsed
// value and advances pos past the run. nullopt if no numeral is present.
std::optional<double> scan_number(const std::string& text, size_t& pos) {
  size_t end = pos;
  std::string run;
  while (end < text.size()) {
    // Decode one code point.
    unsigned char c = text[end];
    size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : 4;
    if (end + len > text.size()) break;
    auto cps = uni::decode_utf8(std::string_view(text).substr(end, len));
    if (cps.size() != 1 || !is_numeral_cp(cps[0])) break;
    run += text.substr(end, len);
    end += len;
  }
  if (run.empty()) return std::nullopt;
  auto value = parse_cjk_number(run);
  if (value) pos = end;
  return value;
}

struct Span {
  size_t begin = std::string::npos;
  size_t end = std::string::npos;
  bool found() const { return begin != std::string::npos; }
};

// Content between open and close. Empty close or a missing close marker
// ends the span at next_marker (if found later) or EOF.
Span find_span(const std::string& text, const SpanPattern& pattern, size_t from,
               const std::string& next_marker) {
  Span span;
  if (pattern.open.empty()) return span;
  size_t open_at = text.find(pattern.open, from);
  if (open_at == std::string::npos) return span;
  span.begin = open_at + pattern.open.size();
  size_t close_at = std::string::npos;
  if (!pattern.close.empty()) close_at = text.find(pattern.close, span.begin);
  if (close_at == std::string::npos && !next_marker.empty()) {
    close_at = text.find(next_marker, span.begin);
  }
  span.end = close_at == std::string::npos ? text.size() : close_at;
  return span;
}

std::string format_citation(const std::string& format, const std::string& value) {
  if (format.empty()) return value;
  size_t at = format.find("{}");
  if (at == std::string::npos) return format + value;
  return format.substr(0, at) + value + format.substr(at + 2);
}

std::string render_number(double v) {
  if (std::abs(v - std::round(v)) < 1e-9) {
    return std::to_string(static_cast<long long>(std::llround(v)));
  }
  return format_double(v);
}

void extract_citations(const std::string& text, const std::vector<CitePattern>& patterns,
                       std::set<std::string>& out, std::vector<std::string>& diagnostics) {
  for (const auto& pattern : patterns) {
    size_t pos = 0;
    while ((pos = text.find(pattern.prefix, pos)) != std::string::npos) {
      size_t start = pos + pattern.prefix.size();
      size_t close = text.find(pattern.suffix, start);
      pos = start;
      if (close == std::string::npos) break;
      if (close - start > pattern.max_span) continue;
      std::string capture = text.substr(start, close - start);
      bool stopped = false;
      for (const auto& stop : pattern.stop_markers) {
        if (!stop.empty() && capture.find(stop) != std::string::npos) {
          stopped = true;
          break;
        }
      }
      if (stopped) continue;
      std::string value = uni::normalize_key(capture);
      if (value.empty()) continue;
      if (pattern.numeral_normalize) {
        auto num = parse_cjk_number(value);
        if (!num) {
          diagnostics.push_back("citation capture '" + value + "' is not numeric");
          continue;
        }
        value = render_number(*num);
      }
      out.insert(format_citation(pattern.format, value));
      pos = close + pattern.suffix.size();
    }
  }
}

std::optional<double> extract_number(const std::string& text,
                                     const std::vector<NumberPattern>& patterns,
                                     std::vector<std::string>& diagnostics, const char* field) {
  std::optional<double> result;
  size_t extra = 0;
  for (const auto& pattern : patterns) {
    size_t pos = 0;
    while ((pos = text.find(pattern.prefix, pos)) != std::string::npos) {
      size_t cursor = pos + pattern.prefix.size();
      for (const auto& skip : pattern.skips) {
        if (text.compare(cursor, skip.size(), skip) == 0) cursor += skip.size();
      }
      double total = 0.0;
      bool any = false;
      while (true) {
        size_t before = cursor;
        auto value = scan_number(text, cursor);
        if (!value) break;
        bool unit_matched = false;
        for (const auto& [suffix, scale] : pattern.units) {
          if (text.compare(cursor, suffix.size(), suffix) == 0) {
            total += *value * scale;
            cursor += suffix.size();
            any = true;
            unit_matched = true;
            break;
          }
        }
        if (!unit_matched) {
          if (pattern.bare_unit_suffix.empty() ||
              text.compare(cursor, pattern.bare_unit_suffix.size(), pattern.bare_unit_suffix) ==
                  0) {
            total += *value * pattern.bare_scale;
            cursor += pattern.bare_unit_suffix.size();
            any = true;
          } else {
            cursor = before;
          }
          break;
        }
      }
      pos = cursor > pos ? cursor : pos + pattern.prefix.size();
      if (!any) continue;
      if (!result) {
        result = total;
      } else {
        ++extra;
      }
    }
  }
  if (extra > 0) {
    diagnostics.push_back(std::string(field) + ": " + std::to_string(extra) +
                          " additional mention(s) ignored; first match kept");
  }
  return result;
}

bool contains_any(const std::string& text, const std::vector<std::string>& markers) {
  for (const auto& m : markers) {
    if (!m.empty() && text.find(m) != std::string::npos) return true;
  }
  return false;
}

PatternSet build_synthetic() {
  PatternSet p;
  p.name = "synthetic";
  p.think = {"<think>", "</think>"};
  p.reasoning = {"[REASONING]", "[/REASONING]"};
  p.judgment = {"[JUDGMENT]", "[/JUDGMENT]"};
  p.statutes = {{"[LAW:", "]", "", false, 64, {}}};
  p.charges = {{"[CHARGE:", "]", "", false, 64, {}}};
  p.prison = {{"[PRISON:", {}, "]", 1.0, {}}};
  p.fines = {{"[FINE:", {}, "]", 1.0, {}}};
  p.acquittal_markers = {"[VERDICT:acquittal]"};
  p.conviction_markers = {"[VERDICT:conviction]"};
  p.chinese_numerals = false;
  return p;
}

PatternSet build_chinese() {
  PatternSet p;
  p.name = "zh";
  p.think = {"<think>", "</think>"};
  p.reasoning = {"本院认为", "判决如下"};
  p.judgment = {"判决如下", ""};
  p.statutes = {{"《中华人民共和国刑法》第", "条", "刑法第{}条", true, 64, {}}};
  p.charges = {{"犯", "罪", "", false, 48, {"，", "。", "、", "；", "的"}}};
  // Durations normalize to months, fines to yuan. The numeral scanner
  // folds 千/万 into the value, so 元 alone covers 五千元 and 三万元.
  p.prison = {{"有期徒刑", {{"年", 12.0}, {"个月", 1.0}, {"月", 1.0}}, "", 1.0, {}},
              {"拘役", {{"年", 12.0}, {"个月", 1.0}, {"月", 1.0}}, "", 1.0, {}}};
  p.fines = {{"罚金", {{"元", 1.0}}, "", 1.0, {"人民币"}}};
  p.acquittal_markers = {"无罪"};
  p.conviction_markers = {"有期徒刑", "拘役", "罚金", "判处"};
  p.chinese_numerals = true;
  return p;
}

CitePattern cite_from_json(const io::json& j) {
  CitePattern c;
  c.prefix = j.value("prefix", "");
  c.suffix = j.value("suffix", "");
  c.format = j.value("format", "");
  c.numeral_normalize = j.value("numeral_normalize", false);
  c.max_span = j.value("max_span", size_t{64});
  if (j.contains("stop_markers")) {
    c.stop_markers = j["stop_markers"].get<std::vector<std::string>>();
  }
  return c;
}

NumberPattern number_from_json(const io::json& j) {
  NumberPattern n;
  n.prefix = j.value("prefix", "");
  if (j.contains("units")) {
    for (const auto& u : j["units"]) {
      n.units.emplace_back(u[0].get<std::string>(), u[1].get<double>());
    }
  }
  n.bare_unit_suffix = j.value("bare_unit_suffix", "");
  n.bare_scale = j.value("bare_scale", 1.0);
  if (j.contains("skips")) n.skips = j["skips"].get<std::vector<std::string>>();
  return n;
}

SpanPattern span_from_json(const io::json& j) {
  return {j.value("open", ""), j.value("close", "")};
}

}  // namespace

const PatternSet& PatternSet::synthetic() {
  static const PatternSet p = build_synthetic();
  return p;
}

const PatternSet& PatternSet::chinese() {
  static const PatternSet p = build_chinese();
  return p;
}

PatternSet PatternSet::from_json_file(const std::filesystem::path& path) {
  io::json root = io::json::parse(io::read_file(path), nullptr, false);
  if (root.is_discarded()) throw ValidationError("pattern config is not valid json: " + path.string());
  PatternSet p;
  p.name = root.value("name", path.filename().string());
  if (root.contains("think")) p.think = span_from_json(root["think"]);
  if (root.contains("reasoning")) p.reasoning = span_from_json(root["reasoning"]);
  if (root.contains("judgment")) p.judgment = span_from_json(root["judgment"]);
  for (const auto& j : root.value("statutes", io::json::array())) p.statutes.push_back(cite_from_json(j));
  for (const auto& j : root.value("charges", io::json::array())) p.charges.push_back(cite_from_json(j));
  for (const auto& j : root.value("prison", io::json::array())) p.prison.push_back(number_from_json(j));
  for (const auto& j : root.value("fines", io::json::array())) p.fines.push_back(number_from_json(j));
  if (root.contains("acquittal_markers")) {
    p.acquittal_markers = root["acquittal_markers"].get<std::vector<std::string>>();
  }
  if (root.contains("conviction_markers")) {
    p.conviction_markers = root["conviction_markers"].get<std::vector<std::string>>();
  }
  p.chinese_numerals = root.value("chinese_numerals", false);
  return p;
}

PatternSet PatternSet::resolve(const std::string& spec) {
  if (spec == "synthetic") return synthetic();
  if (spec == "zh" || spec == "chinese") return chinese();
  return from_json_file(spec);
}

std::optional<double> parse_cjk_number(const std::string& text) {
  auto cps = uni::decode_utf8(text);
  if (cps.empty()) return std::nullopt;

  double total = 0.0;    // completed 万/亿 sections
  double section = 0.0;  // value below the next big unit
  double current = 0.0;  // digits accumulated since the last unit
  bool any = false;
  bool current_from_cjk = false;
  std::string arabic;  // pending ASCII digit run (may hold a decimal)

  auto flush_arabic = [&]() -> bool {
    if (arabic.empty()) return true;
    if (current_from_cjk || current != 0.0) return false;  // mixed digit forms
    try {
      size_t used = 0;
      current = std::stod(arabic, &used);
      if (used != arabic.size()) return false;
    } catch (...) {
      return false;
    }
    arabic.clear();
    return true;
  };

  for (uint32_t cp : cps) {
    if ((cp >= '0' && cp <= '9') || (cp >= 0xFF10 && cp <= 0xFF19)) {
      if (current_from_cjk) return std::nullopt;
      arabic.push_back(cp <= '9' ? static_cast<char>(cp)
                                 : static_cast<char>('0' + (cp - 0xFF10)));
      any = true;
      continue;
    }
    if (cp == '.') {
      if (arabic.empty()) return std::nullopt;
      arabic.push_back('.');
      continue;
    }
    if (cp == ',') continue;
    auto info = numeral_info(cp);
    if (!info) return std::nullopt;
    any = true;
    switch (info->kind) {
      case NumeralInfo::Digit:
        if (!arabic.empty()) return std::nullopt;
        current = current * 10.0 + info->value;
        current_from_cjk = true;
        break;
      case NumeralInfo::SmallUnit:
        if (!flush_arabic()) return std::nullopt;
        section += (current == 0.0 ? 1.0 : current) * info->value;
        current = 0.0;
        current_from_cjk = false;
        break;
      case NumeralInfo::BigUnit:
        if (!flush_arabic()) return std::nullopt;
        total = (total + section + current) * info->value;
        section = 0.0;
        current = 0.0;
        current_from_cjk = false;
        break;
    }
  }
  if (!flush_arabic()) return std::nullopt;
  if (!any) return std::nullopt;
  return total + section + current;
}

JudgmentExtract parse_judgment(const std::string& text, const PatternSet& patterns) {
  JudgmentExtract ex;

  Span think = find_span(text, patterns.think, 0, "");
  if (think.found()) {
    ex.think_trace = std::string(trim(text.substr(think.begin, think.end - think.begin)));
  } else {
    ex.diagnostics.push_back("no think trace found");
  }
  size_t body_from = think.found() ? think.end : 0;

  Span reasoning = find_span(text, patterns.reasoning, body_from, patterns.judgment.open);
  if (reasoning.found()) {
    ex.reasoning_section =
        std::string(trim(text.substr(reasoning.begin, reasoning.end - reasoning.begin)));
  } else {
    ex.diagnostics.push_back("reasoning section marker not found");
  }

  size_t judgment_from = reasoning.found() ? reasoning.end : body_from;
  Span judgment = find_span(text, patterns.judgment, judgment_from, "");
  if (judgment.found()) {
    ex.judgment_section =
        std::string(trim(text.substr(judgment.begin, judgment.end - judgment.begin)));
  } else {
    ex.diagnostics.push_back("judgment section marker not found");
  }

  extract_citations(text, patterns.statutes, ex.statute_ids, ex.diagnostics);
  extract_citations(text, patterns.charges, ex.charges, ex.diagnostics);
  ex.prison_months = extract_number(text, patterns.prison, ex.diagnostics, "prison");
  ex.fine_amount = extract_number(text, patterns.fines, ex.diagnostics, "fine");

  if (contains_any(text, patterns.acquittal_markers)) {
    ex.verdict = Verdict::Acquittal;
  } else if (contains_any(text, patterns.conviction_markers)) {
    ex.verdict = Verdict::Conviction;
  } else {
    ex.verdict = Verdict::Unknown;
    ex.diagnostics.push_back("verdict could not be determined");
  }
  if (ex.verdict == Verdict::Acquittal && (ex.prison_months || ex.fine_amount)) {
    ex.diagnostics.push_back("acquittal verdict: dropping extracted penalty values");
    ex.prison_months.reset();
    ex.fine_amount.reset();
  }
  return ex;
}

double numeric_match(double a, double b) {
  if (a < 0 || b < 0) throw ValidationError("numeric_match requires nonnegative inputs");
  double denom = std::max({a, b, 1.0});
  return std::max(0.0, 1.0 - std::abs(a - b) / denom);
}

EndpointSimilarityScorer::EndpointSimilarityScorer(std::string url, Transport transport)
    : url_(std::move(url)), transport_(std::move(transport)) {
  if (url_.empty()) throw ValidationError("similarity endpoint url is empty");
  if (!transport_) {
    transport_ = [](const std::string& url, const std::string& body) {
      auto scheme_end = url.find("://");
      if (scheme_end == std::string::npos) {
        throw BackendError("malformed similarity endpoint url: " + url);
      }
      auto path_start = url.find('/', scheme_end + 3);
      std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
      std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
      httplib::Client client(base);
      client.set_connection_timeout(10);
      client.set_read_timeout(30);
      auto res = client.Post(path, body, "application/json");
      if (!res) {
        throw BackendError("similarity endpoint unreachable: " + httplib::to_string(res.error()));
      }
      return std::make_pair(res->status, res->body);
    };
  }
}

double EndpointSimilarityScorer::similarity(const std::string& candidate,
                                            const std::string& reference) {
  io::json body{{"candidate", candidate}, {"reference", reference}};
  auto [status, response] = transport_(url_, body.dump());
  if (status != 200) {
    throw BackendError("similarity endpoint returned status " + std::to_string(status));
  }
  io::json parsed = io::json::parse(response, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("score") || !parsed["score"].is_number()) {
    throw BackendError("similarity endpoint returned a malformed score payload");
  }
  double s = parsed["score"].get<double>();
  if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
    throw BackendError("similarity endpoint score out of [0,1]: " + format_double(s));
  }
  return s;
}

std::unique_ptr<SimilarityScorer> make_similarity_scorer(const std::string& spec) {
  if (spec.empty() || spec == "token-f1") return std::make_unique<TokenF1Scorer>();
  if (starts_with(spec, "endpoint:")) {
    return std::make_unique<EndpointSimilarityScorer>(spec.substr(9));
  }
  throw ValidationError("unknown similarity scorer spec: '" + spec + "'");
}

double TokenF1Scorer::similarity(const std::string& candidate, const std::string& reference) {
  auto c = tokenize(candidate, TokenizerMode::Auto);
  auto r = tokenize(reference, TokenizerMode::Auto);
  if (c.empty() && r.empty()) return 1.0;
  if (c.empty() || r.empty()) return 0.0;
  std::unordered_map<std::string, int64_t> counts;
  for (const auto& t : r) ++counts[t];
  int64_t overlap = 0;
  for (const auto& t : c) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return 2.0 * static_cast<double>(overlap) / static_cast<double>(c.size() + r.size());
}

double legal_reward(const JudgmentExtract& cand, const JudgmentExtract& gold,
                    const LegalSubWeights& sub_weights) {
  if (gold.verdict == Verdict::Unknown) {
    throw ValidationError("legal_reward: gold verdict must be known");
  }
  double weight_sum =
      sub_weights.statutes + sub_weights.charges + sub_weights.prison + sub_weights.fine;
  if (!(weight_sum > 0)) throw ValidationError("legal_reward: sub-weights must sum to > 0");

  double f1_statutes = set_f1(cand.statute_ids, gold.statute_ids);
  double f1_charges = set_f1(cand.charges, gold.charges);

  bool conflict = (cand.verdict == Verdict::Acquittal && gold.verdict == Verdict::Conviction) ||
                  (cand.verdict == Verdict::Conviction && gold.verdict == Verdict::Acquittal);
  double s_prison = conflict ? 0.0 : numeric_pair(cand.prison_months, gold.prison_months);
  double s_fine = conflict ? 0.0 : numeric_pair(cand.fine_amount, gold.fine_amount);

  return (sub_weights.statutes * f1_statutes + sub_weights.charges * f1_charges +
          sub_weights.prison * s_prison + sub_weights.fine * s_fine) /
         weight_sum;
}

double struct_reward(const JudgmentExtract& cand, const JudgmentExtract& gold,
                     SimilarityScorer& scorer) {
  auto section_score = [&](const std::optional<std::string>& c,
                           const std::optional<std::string>& g) {
    if (!c || !g) return 0.0;
    return std::clamp(scorer.similarity(*c, *g), 0.0, 1.0);
  };
  return 0.5 * (section_score(cand.reasoning_section, gold.reasoning_section) +
                section_score(cand.judgment_section, gold.judgment_section));
}

double logic_reward(const std::optional<std::string>& think_trace,
                    const LogicThresholds& thresholds) {
  if (!think_trace) return 0.0;
  auto tokens = tokenize(*think_trace, TokenizerMode::Auto);
  if (tokens.empty()) return 0.0;

  double s_len = 0.0;
  for (const auto& [bound, score] : thresholds.len_bands) {
    if (tokens.size() >= bound) s_len = score;
  }

  double s_rep = 0.0;
  if (tokens.size() >= 3) {
    std::unordered_set<std::string> distinct;
    size_t tri_total = tokens.size() - 2;
    for (size_t i = 0; i + 2 < tokens.size(); ++i) {
      distinct.insert(tokens[i] + "\x1f" + tokens[i + 1] + "\x1f" + tokens[i + 2]);
    }
    s_rep = thresholds.s_rep_max *
            (static_cast<double>(distinct.size()) / static_cast<double>(tri_total));
  }
  return std::min(1.0, s_len + s_rep);
}

JudgmentExtract gold_extract(const CaseRecord& gold, const PatternSet& patterns) {
  JudgmentExtract ex;
  // Entities come from the labels; only sections and the trace come from
  // parsing the gold text.
  JudgmentExtract parsed = parse_judgment(gold.gold_judgment_text, patterns);
  ex.statute_ids = gold.gold_evidence_ids;
  ex.charges = gold.gold_charges;
  if (gold.gold_prison_months) ex.prison_months = static_cast<double>(*gold.gold_prison_months);
  ex.fine_amount = gold.gold_fine_amount;
  ex.verdict = gold.gold_verdict;
  ex.reasoning_section = parsed.reasoning_section;
  ex.judgment_section = parsed.judgment_section;
  ex.think_trace = parsed.think_trace;
  return ex;
}

RewardBreakdown total_reward(const std::string& cand_text, const CaseRecord& gold,
                             const RubricConfig& config, SimilarityScorer& scorer) {
  return total_reward(cand_text, gold, config, scorer, PatternSet::resolve(config.pattern_set));
}

RewardBreakdown total_reward(const std::string& cand_text, const CaseRecord& gold,
                             const RubricConfig& config, SimilarityScorer& scorer,
                             const PatternSet& patterns) {
  double wsum = config.weights.legal + config.weights.structure + config.weights.logic;
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw ValidationError("reward weights must sum to 1, got " + format_double(wsum));
  }
  JudgmentExtract cand = parse_judgment(cand_text, patterns);
  JudgmentExtract goldex = gold_extract(gold, patterns);

  RewardBreakdown breakdown;
  breakdown.weights = config.weights;
  breakdown.r_legal = legal_reward(cand, goldex, config.sub_weights);
  breakdown.r_struct = struct_reward(cand, goldex, scorer);
  breakdown.r_logic = logic_reward(cand.think_trace, config.logic);
  breakdown.total = config.weights.legal * breakdown.r_legal +
                    config.weights.structure * breakdown.r_struct +
                    config.weights.logic * breakdown.r_logic;
  breakdown.diagnostics = cand.diagnostics;
  return breakdown;
}

}  // namespace jf
