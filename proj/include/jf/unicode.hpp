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
#include <string>
#include <string_view>
#include <vector>

namespace jf::uni {

// Decodes UTF-8 into code points. Invalid byte sequences decode to U+FFFD
// (one replacement per bad byte) so downstream processing stays total.
std::vector<uint32_t> decode_utf8(std::string_view s);

std::string encode_utf8(const std::vector<uint32_t>& cps);
void append_utf8(std::string& out, uint32_t cp);

// Canonical composition normal form over the full Unicode database
// (tables generated from UnicodeData; Hangul handled algorithmically).
std::string nfc(std::string_view s);

// NFC + whitespace trim: the canonical key form under which ids and
// charge names are compared for equality.
std::string normalize_key(std::string_view s);

// CJK ideographs plus kana; drives tokenizer auto-detection.
bool is_cjk(uint32_t cp);

bool is_space(uint32_t cp);

}  // namespace jf::uni
