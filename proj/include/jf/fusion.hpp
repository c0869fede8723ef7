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

#include "jf/ranking.hpp"

namespace jf {

struct RouteRanking {
  std::string route_id;   // "standard", "agentic", ...
  double weight = 1.0;    // finite, > 0
  RankedList ranking;     // unique ids
};

// Weighted Reciprocal Rank Fusion:
//   score(d) = sum over routes containing d of weight / (k_rrf + rank(d))
// with 1-based ranks. Output is score-descending, ties by doc id, cut to
// top_n. Absent routes contribute nothing.
RankedList fuse_rrf(const std::vector<RouteRanking>& routes, double k_rrf, size_t top_n);

}  // namespace jf
