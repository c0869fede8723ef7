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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace jf {

// One config file drives every command; flags override individual
// fields. Unknown keys are rejected so typos fail loudly.
struct PipelineConfig {
  struct Paths {
    std::string corpus;
    std::string cases;
    std::string index_dir;
    std::string output_dir;
  } paths;

  struct Fusion {
    double w_agent = 2.0;
    double w_std = 1.0;
    double k_rrf = 60.0;
    size_t top_n = 50;
    bool per_kind = false;
  } fusion;

  struct Reward {
    double w_legal = 0.6;
    double w_struct = 0.3;
    double w_logic = 0.1;
    double sw_statutes = 0.25;
    double sw_charges = 0.25;
    double sw_prison = 0.25;
    double sw_fine = 0.25;
    std::vector<std::pair<size_t, double>> len_bands = {
        {0, 0.0}, {32, 0.3}, {128, 0.6}, {1024, 0.3}};
    double s_rep_max = 0.4;
    std::string pattern_set = "synthetic";
    std::string similarity = "token-f1";  // or endpoint:<url>
  } reward;

  struct Grpo {
    size_t group_size = 16;
    double epsilon = 1e-6;
    double kl_beta = 0.05;
    double learning_rate = 0.3;
    size_t iterations = 200;
    uint64_t seed = 7;
    double clip_ratio = 0.0;
  } grpo;

  struct Agent {
    size_t m_max = 5;
    size_t k_per_query = 20;
    size_t n_min = 3;
    size_t n_min_statutes = 0;    // per-kind floor, 0 disables
    size_t n_min_precedents = 0;  // per-kind floor, 0 disables
    size_t l_target = 8;
    double a = 0.5;
    double b = 0.5;
    double c = 0.1;
    double alpha = 0.5;
    size_t fallback_window = 2;
    double overage_cap = 20.0;
  } agent;

  struct Sparse {
    double k1 = 1.2;
    double b = 0.75;
    std::string tokenizer = "auto";
  } sparse;

  struct Dense {
    std::string provider = "hash:64";
    size_t max_inflight = 2;  // bound for remote providers; the bundled
                              // local provider embeds synchronously
  } dense;

  struct Mining {
    size_t k_folds = 5;
    size_t n_neg = 4;
    size_t depth = 100;
  } mining;

  struct Rerank {
    std::string scorer = "overlap";
    size_t top_m = 50;
    size_t depth = 50;
  } rerank;

  struct Llm {
    std::string planner;   // backend spec; empty = deterministic fallback
    std::string selector;  // backend spec; empty = rank-based selection
    int max_retries = 3;
    int base_delay_ms = 100;
  } llm;

  static PipelineConfig from_json(const nlohmann::json& root);
  static PipelineConfig from_file(const std::filesystem::path& path);

  // Throws ValidationError naming the offending field.
  void validate() const;

  nlohmann::json to_json() const;
  std::string config_hash() const;  // fnv1a64 hex of the canonical dump
};

}  // namespace jf
