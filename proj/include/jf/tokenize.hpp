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

#include <string>
#include <string_view>
#include <vector>

namespace jf {

// Whitespace: split on whitespace/punctuation, ASCII-lowercased.
// CharBigram: CJK runs emit character bigrams (a single ideograph emits a
// unigram); non-CJK runs fall back to the whitespace rule.
// Auto: per-text detection, CharBigram iff the text contains any CJK
// code point.
enum class TokenizerMode { Whitespace, CharBigram, Auto };

TokenizerMode tokenizer_mode_from_string(std::string_view name);
std::string to_string(TokenizerMode mode);

std::vector<std::string> tokenize(std::string_view text, TokenizerMode mode);

// Sentence segmentation used by the fallback query planner and fixture
// tooling. Splits on ASCII and CJK sentence terminators plus newlines;
// empty sentences are dropped.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace jf
