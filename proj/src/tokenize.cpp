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
#include "jf/tokenize.hpp"

#include <cctype>

#include "jf/unicode.hpp"
#include "jf/util.hpp"

namespace jf {

namespace {

bool is_ascii_punct(uint32_t cp) {
  return cp < 0x80 && std::ispunct(static_cast<int>(cp));
}

bool is_cjk_punct(uint32_t cp) {
  // Fullwidth/ideographic punctuation commonly found in legal text.
  return (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
         (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
         (cp >= 0xFF5B && cp <= 0xFF65) || cp == 0x2018 || cp == 0x2019 || cp == 0x201C ||
         cp == 0x201D;
}

bool is_separator(uint32_t cp) {
  return uni::is_space(cp) || is_ascii_punct(cp) || is_cjk_punct(cp);
}

uint32_t ascii_lower(uint32_t cp) {
  return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
}

void flush_word(std::vector<uint32_t>& word, std::vector<std::string>& out) {
  if (!word.empty()) {
    out.push_back(uni::encode_utf8(word));
    word.clear();
  }
}

void flush_cjk_run(std::vector<uint32_t>& run, std::vector<std::string>& out) {
  if (run.empty()) return;
  if (run.size() == 1) {
    out.push_back(uni::encode_utf8(run));
  } else {
    for (size_t i = 0; i + 1 < run.size(); ++i) {
      std::string tok;
      uni::append_utf8(tok, run[i]);
      uni::append_utf8(tok, run[i + 1]);
      out.push_back(std::move(tok));
    }
  }
  run.clear();
}

std::vector<std::string> tokenize_whitespace(const std::vector<uint32_t>& cps) {
  std::vector<std::string> out;
  std::vector<uint32_t> word;
  for (uint32_t cp : cps) {
    if (is_separator(cp)) {
      flush_word(word, out);
    } else {
      word.push_back(ascii_lower(cp));
    }
  }
  flush_word(word, out);
  return out;
}

std::vector<std::string> tokenize_bigram(const std::vector<uint32_t>& cps) {
  std::vector<std::string> out;
  std::vector<uint32_t> word;
  std::vector<uint32_t> cjk_run;
  for (uint32_t cp : cps) {
    if (uni::is_cjk(cp)) {
      flush_word(word, out);
      cjk_run.push_back(cp);
    } else if (is_separator(cp)) {
      flush_word(word, out);
      flush_cjk_run(cjk_run, out);
    } else {
      flush_cjk_run(cjk_run, out);
      word.push_back(ascii_lower(cp));
    }
  }
  flush_word(word, out);
  flush_cjk_run(cjk_run, out);
  return out;
}

}  // namespace

TokenizerMode tokenizer_mode_from_string(std::string_view name) {
  if (name == "whitespace") return TokenizerMode::Whitespace;
  if (name == "bigram") return TokenizerMode::CharBigram;
  if (name == "auto") return TokenizerMode::Auto;
  throw ValidationError("unknown tokenizer mode: " + std::string(name));
}

std::string to_string(TokenizerMode mode) {
  switch (mode) {
    case TokenizerMode::Whitespace: return "whitespace";
    case TokenizerMode::CharBigram: return "bigram";
    case TokenizerMode::Auto: return "auto";
  }
  return "auto";
}

std::vector<std::string> tokenize(std::string_view text, TokenizerMode mode) {
  auto cps = uni::decode_utf8(text);
  if (mode == TokenizerMode::Auto) {
    mode = TokenizerMode::Whitespace;
    for (uint32_t cp : cps) {
      if (uni::is_cjk(cp)) {
        mode = TokenizerMode::CharBigram;
        break;
      }
    }
  }
  return mode == TokenizerMode::CharBigram ? tokenize_bigram(cps) : tokenize_whitespace(cps);
}

std::vector<std::string> split_sentences(std::string_view text) {
  auto cps = uni::decode_utf8(text);
  std::vector<std::string> out;
  std::vector<uint32_t> sentence;
  auto flush = [&] {
    std::string s = uni::encode_utf8(sentence);
    auto t = trim(s);
    if (!t.empty()) out.emplace_back(t);
    sentence.clear();
  };
  for (uint32_t cp : cps) {
    if (cp == '.' || cp == '!' || cp == '?' || cp == '\n' || cp == 0x3002 /* 。 */ ||
        cp == 0xFF01 /* ！ */ || cp == 0xFF1F /* ？ */ || cp == 0xFF61 || cp == ';') {
      flush();
    } else {
      sentence.push_back(cp);
    }
  }
  flush();
  return out;
}

}  // namespace jf
