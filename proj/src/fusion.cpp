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
#include "jf/fusion.hpp"

#include <cmath>
#include <map>
#include <unordered_set>

#include "jf/util.hpp"

namespace jf {

RankedList fuse_rrf(const std::vector<RouteRanking>& routes, double k_rrf, size_t top_n) {
  if (routes.empty()) throw ValidationError("fuse_rrf: need at least one route");
  if (!(k_rrf > 0)) throw ValidationError("fuse_rrf: k_rrf must be > 0");

  // std::map keeps accumulation order independent of insertion order.
  std::map<std::string, double> scores;
  for (const auto& route : routes) {
    if (!(route.weight > 0) || !std::isfinite(route.weight)) {
      throw ValidationError("fuse_rrf: route '" + route.route_id +
                            "' needs a finite positive weight");
    }
    std::unordered_set<std::string> seen;
    for (size_t i = 0; i < route.ranking.size(); ++i) {
      const auto& id = route.ranking[i].doc_id;
      if (!seen.insert(id).second) {
        throw ValidationError("fuse_rrf: duplicate id '" + id + "' in route '" + route.route_id +
                              "'");
      }
      scores[id] += route.weight / (k_rrf + static_cast<double>(i + 1));
    }
  }

  RankedList out;
  out.reserve(scores.size());
  for (const auto& [id, score] : scores) out.push_back({id, score});
  sort_ranked(out);
  truncate_ranked(out, top_n);
  return out;
}

}  // namespace jf
