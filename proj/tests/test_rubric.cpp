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

#include <random>

#include <json.hpp>

#include "jf/util.hpp"
#include "jf/rubric.hpp"
#include "support/testutil.hpp"

using namespace jf;

namespace {

const char* kTaggedDoc =
    "<think> the court reviews each element carefully </think>\n"
    "[REASONING] citing [LAW:L12] and [LAW:L13] the charge [CHARGE:theft] holds. [/REASONING]\n"
    "[JUDGMENT] [VERDICT:conviction] [PRISON:18] [FINE:5000] so ordered. [/JUDGMENT]";

CaseRecord gold_case() {
  CaseRecord rec;
  rec.id = "c1";
  rec.facts = "facts";
  rec.gold_evidence_ids = {"L12", "L13"};
  rec.gold_charges = {"theft"};
  rec.gold_prison_months = 18;
  rec.gold_fine_amount = 5000.0;
  rec.gold_verdict = Verdict::Conviction;
  rec.gold_judgment_text = kTaggedDoc;
  return rec;
}

}  // namespace

TEST_CASE("tagged grammar extraction is self-describing") {
  auto ex = parse_judgment(kTaggedDoc, PatternSet::synthetic());
  CHECK(ex.statute_ids == std::set<std::string>{"L12", "L13"});
  CHECK(ex.charges == std::set<std::string>{"theft"});
  REQUIRE(ex.prison_months.has_value());
  CHECK(*ex.prison_months == doctest::Approx(18.0));
  REQUIRE(ex.fine_amount.has_value());
  CHECK(*ex.fine_amount == doctest::Approx(5000.0));
  CHECK(ex.verdict == Verdict::Conviction);
  REQUIRE(ex.think_trace.has_value());
  CHECK(*ex.think_trace == "the court reviews each element carefully");
  REQUIRE(ex.reasoning_section.has_value());
  CHECK(ex.reasoning_section->find("[LAW:L12]") != std::string::npos);
  REQUIRE(ex.judgment_section.has_value());
  CHECK(ex.judgment_section->find("so ordered.") != std::string::npos);
}

TEST_CASE("missing judgment marker leaves the section null") {
  std::string doc = "<think> t </think>\n[REASONING] content [/REASONING]\nno marker here";
  auto ex = parse_judgment(doc, PatternSet::synthetic());
  CHECK_FALSE(ex.judgment_section.has_value());
  CHECK(ex.reasoning_section.has_value());
  bool noted = false;
  for (const auto& d : ex.diagnostics) {
    if (d.find("judgment section") != std::string::npos) noted = true;
  }
  CHECK(noted);
}

TEST_CASE("chinese pattern set extracts and normalizes entities") {
  std::string doc =
      "本院认为，被告人犯盗窃罪，依照《中华人民共和国刑法》第二百六十四条之规定。判决如下："
      "判处有期徒刑一年六个月，并处罚金人民币五千元。";
  auto ex = parse_judgment(doc, PatternSet::chinese());
  CHECK(ex.charges == std::set<std::string>{"盗窃"});
  CHECK(ex.statute_ids == std::set<std::string>{"刑法第264条"});
  REQUIRE(ex.prison_months.has_value());
  CHECK(*ex.prison_months == doctest::Approx(18.0));  // 一年六个月
  REQUIRE(ex.fine_amount.has_value());
  CHECK(*ex.fine_amount == doctest::Approx(5000.0));  // 五千元
  CHECK(ex.verdict == Verdict::Conviction);
  REQUIRE(ex.reasoning_section.has_value());
  REQUIRE(ex.judgment_section.has_value());
}

TEST_CASE("acquittal parses to null penalties even when numbers appear") {
  std::string doc = "本院认为证据不足。判决如下：宣告被告人无罪。罚金五千元不再执行。";
  auto ex = parse_judgment(doc, PatternSet::chinese());
  CHECK(ex.verdict == Verdict::Acquittal);
  CHECK_FALSE(ex.prison_months.has_value());
  CHECK_FALSE(ex.fine_amount.has_value());
}

TEST_CASE("cjk numeral parsing table") {
  CHECK(*parse_cjk_number("18") == doctest::Approx(18));
  CHECK(*parse_cjk_number("十八") == doctest::Approx(18));
  CHECK(*parse_cjk_number("二十") == doctest::Approx(20));
  CHECK(*parse_cjk_number("一百零五") == doctest::Approx(105));
  CHECK(*parse_cjk_number("五千") == doctest::Approx(5000));
  CHECK(*parse_cjk_number("一万二千") == doctest::Approx(12000));
  CHECK(*parse_cjk_number("3万") == doctest::Approx(30000));
  CHECK(*parse_cjk_number("1.5万") == doctest::Approx(15000));
  CHECK(*parse_cjk_number("5,000") == doctest::Approx(5000));
  CHECK_FALSE(parse_cjk_number("两年").has_value());  // units live in patterns, not numerals
  CHECK(parse_cjk_number("") == std::nullopt);
  CHECK(parse_cjk_number("abc") == std::nullopt);
}

TEST_CASE("numeric match closed forms and symmetry") {
  CHECK(numeric_match(12, 12) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(numeric_match(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(numeric_match(6, 12) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(numeric_match(24, 12) == doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 1e6);
  for (int i = 0; i < 1000; ++i) {
    double a = dist(rng), b = dist(rng);
    CHECK(numeric_match(a, b) == numeric_match(b, a));
    CHECK(numeric_match(a, b) >= 0.0);
    CHECK(numeric_match(a, b) <= 1.0);
  }
  CHECK_THROWS_AS(numeric_match(-1, 3), ValidationError);
}

TEST_CASE("legal reward: identical extract scores 1") {
  auto gold = gold_extract(gold_case(), PatternSet::synthetic());
  auto cand = parse_judgment(kTaggedDoc, PatternSet::synthetic());
  CHECK(legal_reward(cand, gold) == doctest::Approx(1.0));
}

TEST_CASE("legal reward: verdict conflict zeroes the numeric components") {
  auto gold = gold_extract(gold_case(), PatternSet::synthetic());
  JudgmentExtract cand;
  cand.statute_ids = gold.statute_ids;  // statutes and charges still count
  cand.charges = gold.charges;
  cand.verdict = Verdict::Acquittal;
  // prison/fine null by the acquittal invariant; conflict forces both
  // numeric terms to 0 regardless.
  CHECK(legal_reward(cand, gold) == doctest::Approx(0.5));
}

TEST_CASE("legal reward: the worked mixed example reaches 0.7917") {
  JudgmentExtract gold;
  gold.statute_ids = {"a", "b", "d"};
  gold.charges = {"theft"};
  gold.prison_months = 12.0;
  gold.fine_amount = 5000.0;
  gold.verdict = Verdict::Conviction;

  JudgmentExtract cand;
  cand.statute_ids = {"a", "b", "c"};  // F1 = 2/3
  cand.charges = {"theft"};            // 1.0
  cand.prison_months = 6.0;            // S = 0.5
  cand.fine_amount = 5000.0;           // S = 1.0
  cand.verdict = Verdict::Conviction;

  CHECK(legal_reward(cand, gold) == doctest::Approx(0.7917).epsilon(1e-4));
}

TEST_CASE("legal reward null rules: null-null 1, null-value 0") {
  JudgmentExtract gold;
  gold.verdict = Verdict::Conviction;
  gold.prison_months = 12.0;  // fine null

  JudgmentExtract cand;
  cand.verdict = Verdict::Conviction;
  // cand prison null vs gold 12 -> 0; fines both null -> 1; sets empty-empty -> 1 each.
  CHECK(legal_reward(cand, gold) == doctest::Approx((1.0 + 1.0 + 0.0 + 1.0) / 4.0));
  CHECK_THROWS_AS(legal_reward(cand, JudgmentExtract{}), ValidationError);
}

TEST_CASE("monotone degradation: removing a correct statute never raises r_legal") {
  JudgmentExtract gold;
  gold.statute_ids = {"a", "b", "c"};
  gold.verdict = Verdict::Conviction;
  JudgmentExtract cand = gold;
  double prev = legal_reward(cand, gold);
  cand.statute_ids.erase("c");
  double dropped = legal_reward(cand, gold);
  CHECK(dropped <= prev);
  cand.statute_ids.erase("b");
  CHECK(legal_reward(cand, gold) <= dropped);
}

TEST_CASE("struct reward: identical sections 1.0, missing section halves") {
  TokenF1Scorer scorer;
  JudgmentExtract gold;
  gold.reasoning_section = "the facts support the charge";
  gold.judgment_section = "sentence follows the statute";

  JudgmentExtract cand = gold;
  CHECK(struct_reward(cand, gold, scorer) == doctest::Approx(1.0));

  cand.reasoning_section.reset();
  CHECK(struct_reward(cand, gold, scorer) == doctest::Approx(0.5));
}

TEST_CASE("struct reward: token-overlap half construction gives 0.75") {
  TokenF1Scorer scorer;
  JudgmentExtract gold;
  gold.reasoning_section = "alpha beta";
  gold.judgment_section = "gamma delta";
  JudgmentExtract cand;
  cand.reasoning_section = "alpha beta";  // identical -> 1
  cand.judgment_section = "gamma zeta";   // overlap 1 of 2+2 -> F1 = 0.5
  CHECK(struct_reward(cand, gold, scorer) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("logic reward bands and repetition") {
  LogicThresholds thresholds;

  SUBCASE("null and empty traces score 0") {
    CHECK(logic_reward(std::nullopt, thresholds) == doctest::Approx(0.0));
    CHECK(logic_reward(std::string(""), thresholds) == doctest::Approx(0.0));
  }

  SUBCASE("top band with all-distinct trigrams saturates at 1") {
    std::string trace;
    for (int i = 0; i < 200; ++i) trace += "tok" + std::to_string(i) + " ";
    CHECK(logic_reward(trace, thresholds) == doctest::Approx(1.0));
  }

  SUBCASE("one token repeated 50 times: hand-counted trigram ratio") {
    std::string trace;
    for (int i = 0; i < 50; ++i) trace += "loop ";
    // 50 tokens -> mid band 0.3; trigrams: 1 distinct of 48.
    double expected = 0.3 + 0.4 * (1.0 / 48.0);
    CHECK(logic_reward(trace, thresholds) == doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("overlong traces fall back to the overlong band") {
    std::string trace;
    for (int i = 0; i < 1100; ++i) trace += "t" + std::to_string(i) + " ";
    CHECK(logic_reward(trace, thresholds) == doctest::Approx(0.3 + 0.4));
  }

  SUBCASE("short trace has no trigrams") {
    CHECK(logic_reward(std::string("one two"), thresholds) == doctest::Approx(0.0));
  }
}

TEST_CASE("total reward composes components per the weighted sum") {
  CaseRecord gold = gold_case();
  RubricConfig config;
  TokenF1Scorer scorer;

  SUBCASE("gold text with a strong trace scores >= 0.9") {
    std::string cand = kTaggedDoc;
    // Swap in a top-band trace.
    std::string trace = "<think> ";
    for (int i = 0; i < 200; ++i) trace += "step" + std::to_string(i) + " ";
    trace += "</think>";
    cand = trace + cand.substr(cand.find("\n[REASONING]"));
    auto breakdown = total_reward(cand, gold, config, scorer);
    CHECK(breakdown.r_legal == doctest::Approx(1.0));
    CHECK(breakdown.r_struct == doctest::Approx(1.0));
    CHECK(breakdown.total >= 0.9);
    CHECK(breakdown.total ==
          doctest::Approx(0.6 * breakdown.r_legal + 0.3 * breakdown.r_struct +
                          0.1 * breakdown.r_logic)
              .epsilon(1e-12));
  }

  SUBCASE("empty candidate: struct and logic zero, legal per null rules") {
    auto breakdown = total_reward("", gold, config, scorer);
    CHECK(breakdown.r_struct == doctest::Approx(0.0));
    CHECK(breakdown.r_logic == doctest::Approx(0.0));
    // Empty extraction: sets empty-vs-nonempty 0; numerics null-vs-value 0.
    CHECK(breakdown.r_legal == doctest::Approx(0.0));
  }

  SUBCASE("weight masking isolates the legal component") {
    config.weights = {1.0, 0.0, 0.0};
    auto breakdown = total_reward(kTaggedDoc, gold, config, scorer);
    CHECK(breakdown.total == doctest::Approx(breakdown.r_legal));
  }

  SUBCASE("weights must sum to one") {
    config.weights = {0.6, 0.3, 0.3};
    CHECK_THROWS_AS(total_reward("x", gold, config, scorer), ValidationError);
  }
}

TEST_CASE("boundedness holds on randomized candidates") {
  CaseRecord gold = gold_case();
  RubricConfig config;
  TokenF1Scorer scorer;
  std::mt19937_64 rng(17);
  const char* pieces[] = {"<think>", "</think>", "[REASONING]", "[/REASONING]", "[JUDGMENT]",
                          "[/JUDGMENT]", "[LAW:L12]", "[LAW:zz]", "[CHARGE:theft]",
                          "[PRISON:7]", "[FINE:3]", "[VERDICT:acquittal]",
                          "[VERDICT:conviction]", "words", "more text"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string cand;
    size_t n = rng() % 12;
    for (size_t i = 0; i < n; ++i) {
      cand += pieces[rng() % (sizeof(pieces) / sizeof(pieces[0]))];
      cand += " ";
    }
    auto b = total_reward(cand, gold, config, scorer);
    CHECK(b.r_legal >= 0.0);
    CHECK(b.r_legal <= 1.0);
    CHECK(b.r_struct >= 0.0);
    CHECK(b.r_struct <= 1.0);
    CHECK(b.r_logic >= 0.0);
    CHECK(b.r_logic <= 1.0);
    CHECK(b.total >= 0.0);
    CHECK(b.total <= 1.0);
  }
}

TEST_CASE("parser is total over arbitrary byte soup") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    std::string junk;
    size_t len = rng() % 300;
    for (size_t i = 0; i < len; ++i) junk.push_back(static_cast<char>(rng() % 256));
    // Sprinkle partial markers to reach deeper code paths.
    if (trial % 3 == 0) junk = "<think>" + junk;
    if (trial % 4 == 0) junk += "[LAW:";
    if (trial % 5 == 0) junk += "有期徒刑";
    auto ex = parse_judgment(junk, PatternSet::synthetic());
    auto zh = parse_judgment(junk, PatternSet::chinese());
    if (ex.prison_months) CHECK(*ex.prison_months >= 0);
    if (zh.prison_months) CHECK(*zh.prison_months >= 0);
  }
}

TEST_CASE("pattern sets load from json config files") {
  test::TempDir tmp("patterns");
  test::write_text(tmp.file("custom.json"), R"json({
    "name": "custom",
    "think": {"open": "<why>", "close": "</why>"},
    "reasoning": {"open": "BECAUSE:", "close": "DECIDE:"},
    "judgment": {"open": "DECIDE:", "close": ""},
    "statutes": [{"prefix": "cite(", "suffix": ")"}],
    "charges": [{"prefix": "charge(", "suffix": ")"}],
    "prison": [{"prefix": "months=", "units": [["m", 1.0]]}],
    "fines": [{"prefix": "fine=", "units": [["u", 1.0]]}],
    "conviction_markers": ["GUILTY"],
    "acquittal_markers": ["NOT GUILTY"]
  })json");
  auto patterns = PatternSet::from_json_file(tmp.file("custom.json"));
  auto ex = parse_judgment(
      "<why> thought </why> BECAUSE: cite(s9) charge(arson) GUILTY DECIDE: months=7m fine=20u",
      patterns);
  CHECK(ex.statute_ids == std::set<std::string>{"s9"});
  CHECK(ex.charges == std::set<std::string>{"arson"});
  CHECK(*ex.prison_months == doctest::Approx(7.0));
  CHECK(*ex.fine_amount == doctest::Approx(20.0));
  CHECK(ex.verdict == Verdict::Conviction);
}

TEST_CASE("similarity scorer factory and the remote backend") {
  auto bundled = make_similarity_scorer("token-f1");
  CHECK(bundled->scorer_id() == "token-f1");
  CHECK(bundled->similarity("a b", "a b") == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_similarity_scorer("telepathy"), ValidationError);

  EndpointSimilarityScorer::Transport fake =
      [](const std::string&, const std::string& body) -> std::pair<int, std::string> {
    auto req = nlohmann::json::parse(body);
    CHECK(req.contains("candidate"));
    CHECK(req.contains("reference"));
    if (req["candidate"] == "oops") return {200, R"({"score": 1.7})"};
    return {200, R"({"score": 0.42})"};
  };
  EndpointSimilarityScorer remote("http://sim.invalid/v1", fake);
  CHECK(remote.similarity("x", "y") == doctest::Approx(0.42));
  CHECK_THROWS_AS(remote.similarity("oops", "y"), BackendError);  // out of [0,1]
}
