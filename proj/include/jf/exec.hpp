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

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jf {

// Every data-parallel kernel takes one of these. Serial is the reference
// path: tests assert Parallel produces bit-identical results, which holds
// because each loop iteration writes only its own slot (no reductions
// whose order could differ).
enum class ExecPolicy { Serial, Parallel };

// Runs body(i) for i in [0, n). Parallel uses OpenMP when compiled in,
// otherwise falls back to the serial loop.
template <typename Body>
void parallel_for(ExecPolicy policy, size_t n, Body&& body) {
#ifdef _OPENMP
  if (policy == ExecPolicy::Parallel) {
    const int64_t sn = static_cast<int64_t>(n);
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < sn; ++i) {
      body(static_cast<size_t>(i));
    }
    return;
  }
#else
  (void)policy;
#endif
  for (size_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace jf
