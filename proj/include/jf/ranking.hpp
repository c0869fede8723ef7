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
#include <vector>

namespace jf {

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;

  friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

// Ordered retrieval results, best first. Every producer in this codebase
// guarantees score-descending order with ties broken by ascending doc id.
using RankedList = std::vector<ScoredDoc>;

// Canonical total order: score descending, doc id ascending on ties.
void sort_ranked(RankedList& list);

void truncate_ranked(RankedList& list, size_t k);

}  // namespace jf
