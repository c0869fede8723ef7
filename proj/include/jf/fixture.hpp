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

#include "jf/corpus.hpp"

namespace jf {

// Synthetic multi-issue benchmark. Each topic has one gold statute
// covering all of the topic's vocabulary and several variant statutes
// that mix partial topic vocabulary with terms borrowed from a
// neighboring topic. Cases touch four topics (two described in detail,
// two only briefly), so a single whole-facts query gets diluted by the
// cross-topic variants while per-issue sub-queries stay focused.
struct FixtureSpec {
  size_t n_topics = 40;
  size_t variants_per_topic = 4;  // gold + variants = 5 docs per topic
  size_t n_cases = 50;
  size_t terms_per_topic = 6;
  size_t strong_sentence_terms = 4;
  size_t weak_sentence_terms = 2;
};

CorpusStore make_fixture_store(const FixtureSpec& spec = {});

// Writes corpus.jsonl and cases.jsonl under dir.
void write_fixture_files(const std::filesystem::path& dir, const FixtureSpec& spec = {});

}  // namespace jf
