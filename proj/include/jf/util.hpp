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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jf {

// Input or config that violates a documented contract. CLI maps this to
// exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem trouble: missing file, unwritable path, bad magic.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pluggable backend (LLM endpoint, provider, scorer) failed. CLI maps
// this to exit code 3.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a. Used everywhere a stable, platform-independent hash is
// required (fold assignment, request fingerprints, manifest hashes).
// std::hash is implementation-defined and must not leak into artifacts.
constexpr uint64_t fnv1a64(std::string_view s, uint64_t seed = 0xcbf29ce484222325ULL) {
  uint64_t h = seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(uint64_t v);

// ASCII whitespace trim.
std::string_view trim(std::string_view s);

// Splits on a single-character delimiter; no trimming, keeps empties.
std::vector<std::string> split(std::string_view s, char delim);

// Splits into nonempty trimmed lines.
std::vector<std::string> split_lines(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);

// Locale-independent float formatting with shortest round-trip form.
std::string format_double(double v);

}  // namespace jf
