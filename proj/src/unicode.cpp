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
#include "jf/unicode.hpp"

#include <algorithm>

#include "jf/util.hpp"

namespace jf::uni {

namespace {

struct DecompEntry {
  uint32_t cp;
  uint32_t offset;
  uint32_t length;
};
struct CccEntry {
  uint32_t cp;
  uint8_t ccc;
};
struct CompEntry {
  uint32_t first;
  uint32_t second;
  uint32_t composite;
};

#include "unicode_tables.inc"

constexpr uint32_t kReplacement = 0xFFFD;

// Hangul syllable constants from the Unicode standard, chapter 3.12.
constexpr uint32_t kSBase = 0xAC00, kLBase = 0x1100, kVBase = 0x1161, kTBase = 0x11A7;
constexpr uint32_t kLCount = 19, kVCount = 21, kTCount = 28;
constexpr uint32_t kNCount = kVCount * kTCount;
constexpr uint32_t kSCount = kLCount * kNCount;

const DecompEntry* find_decomp(uint32_t cp) {
  auto it = std::lower_bound(std::begin(kDecomp), std::end(kDecomp), cp,
                             [](const DecompEntry& e, uint32_t v) { return e.cp < v; });
  return (it != std::end(kDecomp) && it->cp == cp) ? &*it : nullptr;
}

uint8_t combining_class(uint32_t cp) {
  auto it = std::lower_bound(std::begin(kCcc), std::end(kCcc), cp,
                             [](const CccEntry& e, uint32_t v) { return e.cp < v; });
  return (it != std::end(kCcc) && it->cp == cp) ? it->ccc : 0;
}

uint32_t compose_pair(uint32_t a, uint32_t b) {
  // Hangul LV and LVT composition.
  if (a >= kLBase && a < kLBase + kLCount && b >= kVBase && b < kVBase + kVCount) {
    return kSBase + ((a - kLBase) * kVCount + (b - kVBase)) * kTCount;
  }
  if (a >= kSBase && a < kSBase + kSCount && (a - kSBase) % kTCount == 0 && b > kTBase &&
      b < kTBase + kTCount) {
    return a + (b - kTBase);
  }
  auto it = std::lower_bound(std::begin(kComp), std::end(kComp), std::make_pair(a, b),
                             [](const CompEntry& e, const std::pair<uint32_t, uint32_t>& v) {
                               return e.first != v.first ? e.first < v.first : e.second < v.second;
                             });
  if (it != std::end(kComp) && it->first == a && it->second == b) return it->composite;
  return 0;
}

void decompose_into(uint32_t cp, std::vector<uint32_t>& out) {
  if (cp >= kSBase && cp < kSBase + kSCount) {
    uint32_t s = cp - kSBase;
    out.push_back(kLBase + s / kNCount);
    out.push_back(kVBase + (s % kNCount) / kTCount);
    if (s % kTCount != 0) out.push_back(kTBase + s % kTCount);
    return;
  }
  if (const DecompEntry* e = find_decomp(cp)) {
    for (uint32_t i = 0; i < e->length; ++i) out.push_back(kDecompPool[e->offset + i]);
    return;
  }
  out.push_back(cp);
}

// Canonical ordering: stable bubble of combining marks, as in UAX #15.
void canonical_order(std::vector<uint32_t>& cps) {
  for (size_t i = 1; i < cps.size(); ++i) {
    uint8_t cc = combining_class(cps[i]);
    if (cc == 0) continue;
    size_t j = i;
    while (j > 0 && combining_class(cps[j - 1]) > cc) {
      std::swap(cps[j - 1], cps[j]);
      --j;
    }
  }
}

// C is blocked from the last starter L iff some character sits between
// them whose combining class is zero or >= ccc(C). The input is already
// canonically ordered, so checking the immediately preceding character
// suffices.
std::vector<uint32_t> compose(const std::vector<uint32_t>& cps) {
  std::vector<uint32_t> out;
  out.reserve(cps.size());
  int last_starter = -1;
  for (uint32_t cp : cps) {
    uint8_t cc = combining_class(cp);
    if (last_starter >= 0) {
      bool starter_adjacent = static_cast<int>(out.size()) - 1 == last_starter;
      bool blocked = !starter_adjacent && combining_class(out.back()) >= cc;
      if (!blocked) {
        if (uint32_t composite = compose_pair(out[last_starter], cp)) {
          out[last_starter] = composite;
          continue;
        }
      }
    }
    if (cc == 0) last_starter = static_cast<int>(out.size());
    out.push_back(cp);
  }
  return out;
}

}  // namespace

std::vector<uint32_t> decode_utf8(std::string_view s) {
  std::vector<uint32_t> cps;
  cps.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    uint32_t cp = 0;
    size_t len = 0;
    if (c < 0x80) {
      cp = c;
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      len = 4;
    } else {
      cps.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      cps.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (size_t k = 1; k < len; ++k) {
      unsigned char cc = s[i + k];
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Reject overlong forms and surrogates.
    if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) ||
        (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) {
      cps.push_back(kReplacement);
      ++i;
      continue;
    }
    cps.push_back(cp);
    i += len;
  }
  return cps;
}

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const std::vector<uint32_t>& cps) {
  std::string out;
  out.reserve(cps.size() * 3);
  for (uint32_t cp : cps) append_utf8(out, cp);
  return out;
}

std::string nfc(std::string_view s) {
  std::vector<uint32_t> nfd;
  nfd.reserve(s.size());
  for (uint32_t cp : decode_utf8(s)) decompose_into(cp, nfd);
  canonical_order(nfd);
  return encode_utf8(compose(nfd));
}

std::string normalize_key(std::string_view s) {
  return nfc(trim(s));
}

bool is_cjk(uint32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) ||    // CJK unified
         (cp >= 0x3400 && cp <= 0x4DBF) ||    // extension A
         (cp >= 0xF900 && cp <= 0xFAFF) ||    // compatibility ideographs
         (cp >= 0x3040 && cp <= 0x30FF) ||    // kana
         (cp >= 0x20000 && cp <= 0x2FA1F);    // extensions B+
}

bool is_space(uint32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\r' || cp == '\n' || cp == 0x3000 || cp == 0xA0;
}

}  // namespace jf::uni
