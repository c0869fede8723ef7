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
#include "jf/config.hpp"

#include <cmath>
#include <initializer_list>
#include <set>

#include "jf/io.hpp"
#include "jf/tokenize.hpp"
#include "jf/util.hpp"

namespace jf {

namespace {

using io::json;

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw ValidationError("config section '" + section + "' must be an object");
  }
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) {
      throw ValidationError("config: unknown key '" + section + (section.empty() ? "" : ".") +
                            key + "'");
    }
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj[key].get<T>();
}

void require_positive(double v, const std::string& field) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw ValidationError("config: " + field + " must be positive, got " + format_double(v));
  }
}

void require_count(size_t v, const std::string& field) {
  if (v < 1) throw ValidationError("config: " + field + " must be >= 1");
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& root) {
  check_keys(root, "",
             {"paths", "fusion", "reward", "grpo", "agent", "sparse", "dense", "mining", "rerank",
              "llm"});
  PipelineConfig cfg;
  if (root.contains("paths")) {
    const auto& j = root["paths"];
    check_keys(j, "paths", {"corpus", "cases", "index_dir", "output_dir"});
    read_field(j, "corpus", cfg.paths.corpus);
    read_field(j, "cases", cfg.paths.cases);
    read_field(j, "index_dir", cfg.paths.index_dir);
    read_field(j, "output_dir", cfg.paths.output_dir);
  }
  if (root.contains("fusion")) {
    const auto& j = root["fusion"];
    check_keys(j, "fusion", {"w_agent", "w_std", "k_rrf", "top_n", "per_kind"});
    read_field(j, "w_agent", cfg.fusion.w_agent);
    read_field(j, "w_std", cfg.fusion.w_std);
    read_field(j, "k_rrf", cfg.fusion.k_rrf);
    read_field(j, "top_n", cfg.fusion.top_n);
    read_field(j, "per_kind", cfg.fusion.per_kind);
  }
  if (root.contains("reward")) {
    const auto& j = root["reward"];
    check_keys(j, "reward",
               {"w_legal", "w_struct", "w_logic", "sw_statutes", "sw_charges", "sw_prison",
                "sw_fine", "len_bands", "s_rep_max", "pattern_set", "similarity"});
    read_field(j, "w_legal", cfg.reward.w_legal);
    read_field(j, "w_struct", cfg.reward.w_struct);
    read_field(j, "w_logic", cfg.reward.w_logic);
    read_field(j, "sw_statutes", cfg.reward.sw_statutes);
    read_field(j, "sw_charges", cfg.reward.sw_charges);
    read_field(j, "sw_prison", cfg.reward.sw_prison);
    read_field(j, "sw_fine", cfg.reward.sw_fine);
    read_field(j, "s_rep_max", cfg.reward.s_rep_max);
    read_field(j, "pattern_set", cfg.reward.pattern_set);
    read_field(j, "similarity", cfg.reward.similarity);
    if (j.contains("len_bands")) {
      cfg.reward.len_bands.clear();
      for (const auto& band : j["len_bands"]) {
        cfg.reward.len_bands.emplace_back(band[0].get<size_t>(), band[1].get<double>());
      }
    }
  }
  if (root.contains("grpo")) {
    const auto& j = root["grpo"];
    check_keys(j, "grpo",
               {"group_size", "epsilon", "kl_beta", "learning_rate", "iterations", "seed",
                "clip_ratio"});
    read_field(j, "group_size", cfg.grpo.group_size);
    read_field(j, "epsilon", cfg.grpo.epsilon);
    read_field(j, "kl_beta", cfg.grpo.kl_beta);
    read_field(j, "learning_rate", cfg.grpo.learning_rate);
    read_field(j, "iterations", cfg.grpo.iterations);
    read_field(j, "seed", cfg.grpo.seed);
    read_field(j, "clip_ratio", cfg.grpo.clip_ratio);
  }
  if (root.contains("agent")) {
    const auto& j = root["agent"];
    check_keys(j, "agent",
               {"m_max", "k_per_query", "n_min", "n_min_statutes", "n_min_precedents",
                "l_target", "a", "b", "c", "alpha", "fallback_window", "overage_cap"});
    read_field(j, "m_max", cfg.agent.m_max);
    read_field(j, "k_per_query", cfg.agent.k_per_query);
    read_field(j, "n_min", cfg.agent.n_min);
    read_field(j, "n_min_statutes", cfg.agent.n_min_statutes);
    read_field(j, "n_min_precedents", cfg.agent.n_min_precedents);
    read_field(j, "l_target", cfg.agent.l_target);
    read_field(j, "a", cfg.agent.a);
    read_field(j, "b", cfg.agent.b);
    read_field(j, "c", cfg.agent.c);
    read_field(j, "alpha", cfg.agent.alpha);
    read_field(j, "fallback_window", cfg.agent.fallback_window);
    read_field(j, "overage_cap", cfg.agent.overage_cap);
  }
  if (root.contains("sparse")) {
    const auto& j = root["sparse"];
    check_keys(j, "sparse", {"k1", "b", "tokenizer"});
    read_field(j, "k1", cfg.sparse.k1);
    read_field(j, "b", cfg.sparse.b);
    read_field(j, "tokenizer", cfg.sparse.tokenizer);
  }
  if (root.contains("dense")) {
    const auto& j = root["dense"];
    check_keys(j, "dense", {"provider", "max_inflight"});
    read_field(j, "provider", cfg.dense.provider);
    read_field(j, "max_inflight", cfg.dense.max_inflight);
  }
  if (root.contains("mining")) {
    const auto& j = root["mining"];
    check_keys(j, "mining", {"k_folds", "n_neg", "depth"});
    read_field(j, "k_folds", cfg.mining.k_folds);
    read_field(j, "n_neg", cfg.mining.n_neg);
    read_field(j, "depth", cfg.mining.depth);
  }
  if (root.contains("rerank")) {
    const auto& j = root["rerank"];
    check_keys(j, "rerank", {"scorer", "top_m", "depth"});
    read_field(j, "scorer", cfg.rerank.scorer);
    read_field(j, "top_m", cfg.rerank.top_m);
    read_field(j, "depth", cfg.rerank.depth);
  }
  if (root.contains("llm")) {
    const auto& j = root["llm"];
    check_keys(j, "llm", {"planner", "selector", "max_retries", "base_delay_ms"});
    read_field(j, "planner", cfg.llm.planner);
    read_field(j, "selector", cfg.llm.selector);
    read_field(j, "max_retries", cfg.llm.max_retries);
    read_field(j, "base_delay_ms", cfg.llm.base_delay_ms);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  json root = json::parse(io::read_file(path), nullptr, false);
  if (root.is_discarded()) {
    throw ValidationError("config file is not valid json: " + path.string());
  }
  return from_json(root);
}

void PipelineConfig::validate() const {
  double wsum = reward.w_legal + reward.w_struct + reward.w_logic;
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw ValidationError("config: reward.w_legal + reward.w_struct + reward.w_logic must sum "
                          "to 1, got " +
                          format_double(wsum));
  }
  for (double w : {reward.w_legal, reward.w_struct, reward.w_logic, reward.sw_statutes,
                   reward.sw_charges, reward.sw_prison, reward.sw_fine}) {
    if (w < 0) throw ValidationError("config: reward weights must be nonnegative");
  }
  require_positive(fusion.w_agent, "fusion.w_agent");
  require_positive(fusion.w_std, "fusion.w_std");
  require_positive(fusion.k_rrf, "fusion.k_rrf");
  require_count(fusion.top_n, "fusion.top_n");
  require_count(grpo.group_size, "grpo.group_size");
  require_positive(grpo.epsilon, "grpo.epsilon");
  if (grpo.kl_beta < 0) throw ValidationError("config: grpo.kl_beta must be >= 0");
  if (grpo.learning_rate < 0) throw ValidationError("config: grpo.learning_rate must be >= 0");
  require_count(grpo.iterations, "grpo.iterations");
  require_count(agent.m_max, "agent.m_max");
  require_count(agent.k_per_query, "agent.k_per_query");
  require_count(agent.n_min, "agent.n_min");
  require_count(agent.fallback_window, "agent.fallback_window");
  if (agent.a < 0 || agent.b < 0 || agent.c < 0) {
    throw ValidationError("config: agent.a/b/c must be nonnegative");
  }
  if (agent.alpha < 0 || agent.alpha > 1) {
    throw ValidationError("config: agent.alpha must be in [0,1]");
  }
  require_positive(sparse.k1, "sparse.k1");
  if (sparse.b < 0 || sparse.b > 1) throw ValidationError("config: sparse.b must be in [0,1]");
  tokenizer_mode_from_string(sparse.tokenizer);
  if (mining.k_folds < 2) throw ValidationError("config: mining.k_folds must be >= 2");
  require_count(mining.n_neg, "mining.n_neg");
  if (mining.depth < mining.n_neg) {
    throw ValidationError("config: mining.depth must be >= mining.n_neg");
  }
  require_count(rerank.top_m, "rerank.top_m");
  require_count(rerank.depth, "rerank.depth");
  if (reward.s_rep_max < 0 || reward.s_rep_max > 1) {
    throw ValidationError("config: reward.s_rep_max must be in [0,1]");
  }
  if (reward.len_bands.empty() || reward.len_bands.front().first != 0) {
    throw ValidationError("config: reward.len_bands must start at bound 0");
  }
  if (llm.max_retries < 0) throw ValidationError("config: llm.max_retries must be >= 0");
}

nlohmann::json PipelineConfig::to_json() const {
  json root;
  root["paths"] = {{"corpus", paths.corpus},
                   {"cases", paths.cases},
                   {"index_dir", paths.index_dir},
                   {"output_dir", paths.output_dir}};
  root["fusion"] = {{"w_agent", fusion.w_agent},
                    {"w_std", fusion.w_std},
                    {"k_rrf", fusion.k_rrf},
                    {"top_n", fusion.top_n},
                    {"per_kind", fusion.per_kind}};
  json bands = json::array();
  for (const auto& [bound, score] : reward.len_bands) {
    bands.push_back(json::array({bound, score}));
  }
  root["reward"] = {{"w_legal", reward.w_legal},       {"w_struct", reward.w_struct},
                    {"w_logic", reward.w_logic},       {"sw_statutes", reward.sw_statutes},
                    {"sw_charges", reward.sw_charges}, {"sw_prison", reward.sw_prison},
                    {"sw_fine", reward.sw_fine},       {"len_bands", bands},
                    {"s_rep_max", reward.s_rep_max},   {"pattern_set", reward.pattern_set},
                    {"similarity", reward.similarity}};
  root["grpo"] = {{"group_size", grpo.group_size}, {"epsilon", grpo.epsilon},
                  {"kl_beta", grpo.kl_beta},       {"learning_rate", grpo.learning_rate},
                  {"iterations", grpo.iterations}, {"seed", grpo.seed},
                  {"clip_ratio", grpo.clip_ratio}};
  root["agent"] = {{"m_max", agent.m_max},
                   {"k_per_query", agent.k_per_query},
                   {"n_min", agent.n_min},
                   {"n_min_statutes", agent.n_min_statutes},
                   {"n_min_precedents", agent.n_min_precedents},
                   {"l_target", agent.l_target},
                   {"a", agent.a},
                   {"b", agent.b},
                   {"c", agent.c},
                   {"alpha", agent.alpha},
                   {"fallback_window", agent.fallback_window},
                   {"overage_cap", agent.overage_cap}};
  root["sparse"] = {{"k1", sparse.k1}, {"b", sparse.b}, {"tokenizer", sparse.tokenizer}};
  root["dense"] = {{"provider", dense.provider}, {"max_inflight", dense.max_inflight}};
  root["mining"] = {{"k_folds", mining.k_folds}, {"n_neg", mining.n_neg}, {"depth", mining.depth}};
  root["rerank"] = {{"scorer", rerank.scorer}, {"top_m", rerank.top_m}, {"depth", rerank.depth}};
  root["llm"] = {{"planner", llm.planner},
                 {"selector", llm.selector},
                 {"max_retries", llm.max_retries},
                 {"base_delay_ms", llm.base_delay_ms}};
  return root;
}

std::string PipelineConfig::config_hash() const { return to_hex(fnv1a64(to_json().dump())); }

}  // namespace jf
