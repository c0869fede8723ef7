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
//
// Times the data-parallel kernels against their serial reference paths:
// dense exhaustive search, BM25 scoring, and toy-policy group sampling.
// Usage: jf-bench [--docs N] [--dim D] [--queries Q] [--quick]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "jf/corpus.hpp"
#include "jf/dense.hpp"
#include "jf/exec.hpp"
#include "jf/fixture.hpp"
#include "jf/grpo.hpp"
#include "jf/sparse.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
double time_it(Fn&& fn, int repeats) {
  auto start = Clock::now();
  for (int r = 0; r < repeats; ++r) fn();
  return seconds_since(start) / repeats;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %9.4f ms   omp %9.4f ms   speedup %5.2fx\n", name, serial_s * 1e3,
              parallel_s * 1e3, parallel_s > 0 ? serial_s / parallel_s : 0.0);
}

// Deterministic filler corpus sized for timing runs.
jf::CorpusStore timing_corpus(size_t docs) {
  jf::CorpusStore store;
  for (size_t i = 0; i < docs; ++i) {
    jf::LegalDocument doc;
    doc.id = "D" + std::to_string(i);
    doc.kind = jf::DocKind::Statute;
    doc.title = "provision " + std::to_string(i);
    std::string text;
    for (size_t t = 0; t < 40; ++t) {
      text += "w" + std::to_string((i * 31 + t * 7) % 2048) + " ";
    }
    doc.text = text;
    store.add_document(std::move(doc));
  }
  return store;
}

}  // namespace

int main(int argc, char** argv) {
  size_t docs = 20000, dim = 128, queries = 16;
  for (int i = 1; i < argc; ++i) {
    auto next = [&](size_t& slot) {
      if (i + 1 < argc) slot = std::stoul(argv[++i]);
    };
    if (std::strcmp(argv[i], "--docs") == 0) next(docs);
    else if (std::strcmp(argv[i], "--dim") == 0) next(dim);
    else if (std::strcmp(argv[i], "--queries") == 0) next(queries);
    else if (std::strcmp(argv[i], "--quick") == 0) {
      docs = 2000;
      dim = 32;
      queries = 4;
    }
  }

  std::printf("threads: %d, docs: %zu, dim: %zu, queries: %zu\n", jf::max_threads(), docs, dim,
              queries);

  auto store = timing_corpus(docs);

  // dense exhaustive dot-product search
  {
    jf::HashEmbeddingProvider provider(dim);
    auto index = jf::DenseIndex::build(store, provider);
    std::vector<std::string> query_texts;
    for (size_t q = 0; q < queries; ++q) {
      query_texts.push_back("w" + std::to_string(q * 13) + " w" + std::to_string(q * 29 + 5));
    }
    auto run = [&](jf::ExecPolicy policy) {
      for (const auto& q : query_texts) {
        auto result = index.search(q, provider, 10, policy);
        if (result.empty()) std::printf("unexpected empty result\n");
      }
    };
    double serial = time_it([&] { run(jf::ExecPolicy::Serial); }, 3);
    double parallel = time_it([&] { run(jf::ExecPolicy::Parallel); }, 3);
    report("dense search", serial, parallel);
  }

  // bm25 candidate scoring
  {
    auto index = jf::SparseIndex::build(store);
    std::vector<std::string> query_texts;
    for (size_t q = 0; q < queries; ++q) {
      std::string text;
      for (size_t t = 0; t < 8; ++t) text += "w" + std::to_string((q * 97 + t * 11) % 2048) + " ";
      query_texts.push_back(text);
    }
    auto run = [&](jf::ExecPolicy policy) {
      for (const auto& q : query_texts) {
        auto result = index.search_bm25(q, 10, {}, policy);
        (void)result;
      }
    };
    double serial = time_it([&] { run(jf::ExecPolicy::Serial); }, 3);
    double parallel = time_it([&] { run(jf::ExecPolicy::Parallel); }, 3);
    report("bm25 scoring", serial, parallel);
  }

  // toy-policy group sampling + reward scoring
  {
    auto task = jf::default_toy_task();
    jf::ToyPolicy policy({2, 2, 2, 2, 2});
    jf::TokenF1Scorer scorer;
    auto patterns = jf::PatternSet::resolve(task.rubric.pattern_set);
    auto run = [&](jf::ExecPolicy exec) {
      auto samples = jf::sample_group(policy, task, 256, 7, exec);
      std::vector<double> rewards(samples.size());
      jf::parallel_for(exec, samples.size(), [&](size_t i) {
        rewards[i] = jf::total_reward(samples[i].text, task.gold, task.rubric, scorer,
                                      patterns).total;
      });
      if (rewards.empty()) std::printf("unexpected empty rewards\n");
    };
    double serial = time_it([&] { run(jf::ExecPolicy::Serial); }, 3);
    double parallel = time_it([&] { run(jf::ExecPolicy::Parallel); }, 3);
    report("group sample + reward", serial, parallel);
  }

  return 0;
}
