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
#include "jf/cli.hpp"

#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "jf/agent.hpp"
#include "jf/config.hpp"
#include "jf/corpus.hpp"
#include "jf/dense.hpp"
#include "jf/fixture.hpp"
#include "jf/fusion.hpp"
#include "jf/grpo.hpp"
#include "jf/io.hpp"
#include "jf/metrics.hpp"
#include "jf/rerank.hpp"
#include "jf/rubric.hpp"
#include "jf/sparse.hpp"
#include "jf/util.hpp"

namespace jf::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

constexpr const char* kGenerationInstruction =
    "Draft the complete judgment document for the case below. Cite the provided "
    "evidence explicitly, reason before deciding, and state the verdict with any "
    "penalty terms.";

// ---------------------------------------------------------------------
// shared helpers

struct Manifest {
  std::string command;
  const PipelineConfig* config = nullptr;
  std::optional<uint64_t> seed;
  std::map<std::string, std::string> inputs;   // name -> content hash
  std::vector<std::string> outputs;

  void add_input(const std::string& name, const fs::path& path) {
    inputs[name] = to_hex(fnv1a64(io::read_file(path)));
  }

  // No timestamps: manifests must be byte-identical across reruns.
  void write(const fs::path& dir) const {
    json root;
    root["command"] = command;
    root["version"] = kVersion;
    if (config != nullptr) root["config_hash"] = config->config_hash();
    if (seed) root["seed"] = *seed;
    root["inputs"] = inputs;
    root["outputs"] = outputs;
    io::atomic_write(dir / "manifest.json", root.dump(2) + "\n");
  }
};

json ranking_record(const std::string& case_id, const std::string& route,
                    const RankedList& items) {
  json arr = json::array();
  for (const auto& item : items) {
    arr.push_back(json{{"id", item.doc_id}, {"score", item.score}});
  }
  return json{{"case_id", case_id}, {"route", route}, {"items", arr}};
}

RankedList ranking_from_record(const json& rec) {
  RankedList out;
  for (const auto& item : rec.at("items")) {
    out.push_back({item.at("id").get<std::string>(), item.at("score").get<double>()});
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(const std::string& spec) {
  // "hash:<dim>[:salt]"
  auto parts = split(spec, ':');
  if (parts.empty() || parts[0] != "hash" || parts.size() < 2) {
    throw ValidationError("unknown embedding provider spec: '" + spec +
                          "' (expected hash:<dim>[:salt])");
  }
  size_t dim = 0;
  try {
    dim = std::stoul(parts[1]);
  } catch (...) {
    throw ValidationError("bad provider dimension in spec: '" + spec + "'");
  }
  std::string salt = parts.size() > 2 ? parts[2] : "";
  return std::make_unique<HashEmbeddingProvider>(dim, salt);
}

std::unique_ptr<PairScorer> make_pair_scorer(const std::string& spec) {
  if (spec == "overlap") return std::make_unique<TokenOverlapScorer>();
  if (starts_with(spec, "stub:")) return std::make_unique<TableScorer>(spec.substr(5));
  if (starts_with(spec, "endpoint:")) return std::make_unique<EndpointPairScorer>(spec.substr(9));
  throw ValidationError("unknown rerank scorer spec: '" + spec + "'");
}

struct LoadedIndexes {
  std::optional<SparseIndex> sparse;
  std::optional<DenseIndex> dense;
};

Retriever make_retriever(const std::string& route, const PipelineConfig& cfg,
                         LoadedIndexes& indexes, EmbeddingProvider* provider) {
  if (route == "sparse") {
    if (!indexes.sparse) throw ValidationError("sparse index not loaded");
    const SparseIndex* idx = &*indexes.sparse;
    Bm25Params params{cfg.sparse.k1, cfg.sparse.b};
    return [idx, params](const std::string& q, size_t k) {
      return idx->search_bm25(q, k, params);
    };
  }
  if (route == "tfidf") {
    if (!indexes.sparse) throw ValidationError("sparse index not loaded");
    const SparseIndex* idx = &*indexes.sparse;
    return [idx](const std::string& q, size_t k) { return idx->search_tfidf(q, k); };
  }
  if (route == "dense") {
    if (!indexes.dense) throw ValidationError("dense index not loaded");
    if (provider == nullptr) throw ValidationError("dense route needs a provider");
    const DenseIndex* idx = &*indexes.dense;
    return [idx, provider](const std::string& q, size_t k) {
      return idx->search(q, *provider, k);
    };
  }
  throw ValidationError("unknown route '" + route + "' (expected sparse|tfidf|dense)");
}

RubricConfig rubric_config_of(const PipelineConfig& cfg) {
  RubricConfig rc;
  rc.weights = {cfg.reward.w_legal, cfg.reward.w_struct, cfg.reward.w_logic};
  rc.sub_weights = {cfg.reward.sw_statutes, cfg.reward.sw_charges, cfg.reward.sw_prison,
                    cfg.reward.sw_fine};
  rc.logic.len_bands = cfg.reward.len_bands;
  rc.logic.s_rep_max = cfg.reward.s_rep_max;
  rc.pattern_set = cfg.reward.pattern_set;
  return rc;
}

// ---------------------------------------------------------------------
// command bodies

void cmd_ingest(const PipelineConfig& cfg, const std::string& corpus_file,
                const std::string& case_file, const fs::path& out_dir, std::ostream& out) {
  CorpusStore store;
  auto report = store.ingest_corpus(corpus_file);
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  IngestReport case_report;
  if (!case_file.empty()) {
    case_report = store.ingest_cases(case_file);
    for (const auto& w : case_report.warnings) out << "warning: " << w << "\n";
  }
  store.snapshot(out_dir / "store.jfs");

  Manifest manifest{.command = "ingest", .config = &cfg};
  manifest.add_input("corpus", corpus_file);
  if (!case_file.empty()) manifest.add_input("cases", case_file);
  manifest.outputs = {"store.jfs"};
  manifest.write(out_dir);
  out << "ingested " << report.record_count << " documents, " << case_report.record_count
      << " cases -> " << (out_dir / "store.jfs").string() << "\n";
}

void cmd_build_index(const PipelineConfig& cfg, bool sparse, bool dense,
                     const std::string& store_file, const fs::path& out_dir, std::ostream& out) {
  if (!sparse && !dense) throw ValidationError("build-index: pass --sparse and/or --dense");
  CorpusStore store = CorpusStore::load_snapshot(store_file);
  Manifest manifest{.command = "build-index", .config = &cfg};
  manifest.add_input("store", store_file);
  if (sparse) {
    auto index = SparseIndex::build(store, tokenizer_mode_from_string(cfg.sparse.tokenizer));
    index.save(out_dir / "sparse.idx");
    manifest.outputs.push_back("sparse.idx");
    out << "sparse index: " << index.stats().doc_count << " docs, " << index.term_count()
        << " terms\n";
  }
  if (dense) {
    auto provider = make_provider(cfg.dense.provider);
    auto index = DenseIndex::build(store, *provider);
    index.save(out_dir / "dense.vec");
    manifest.outputs.push_back("dense.vec");
    out << "dense index: " << index.size() << " vectors, dim " << index.dimension() << "\n";
  }
  manifest.write(out_dir);
}

void cmd_search(const PipelineConfig& cfg, const std::string& route, const std::string& store_file,
                const std::string& index_file, const std::string& query,
                const std::string& query_file, size_t k, bool do_rerank, const fs::path& out_dir,
                std::ostream& out) {
  CorpusStore store = CorpusStore::load_snapshot(store_file);
  LoadedIndexes indexes;
  std::unique_ptr<EmbeddingProvider> provider;
  if (route == "dense") {
    indexes.dense = DenseIndex::load(index_file);
    provider = make_provider(cfg.dense.provider);
  } else {
    indexes.sparse = SparseIndex::load(index_file);
  }
  Retriever retriever = make_retriever(route, cfg, indexes, provider.get());

  std::vector<std::pair<std::string, std::string>> queries;
  if (!query.empty()) queries.emplace_back("q0", query);
  if (!query_file.empty()) {
    io::for_each_jsonl(query_file, [&](size_t lineno, const json& rec) {
      queries.emplace_back(rec.value("id", "q" + std::to_string(lineno)),
                           rec.at("query").get<std::string>());
    });
  }
  if (queries.empty()) throw ValidationError("search: pass --query or --query-file");

  auto doc_text_of = [&store](const std::string& id) {
    const auto* doc = store.find_document(id);
    return doc == nullptr ? std::string{} : doc->title + " " + doc->text;
  };
  std::unique_ptr<PairScorer> scorer;
  if (do_rerank) scorer = make_pair_scorer(cfg.rerank.scorer);

  std::vector<json> records;
  for (const auto& [qid, qtext] : queries) {
    RankedList ranking = retriever(qtext, do_rerank ? cfg.rerank.depth : k);
    if (do_rerank) {
      auto result = rerank(ranking, qtext, *scorer, std::min(cfg.rerank.top_m, k), doc_text_of);
      for (const auto& w : result.warnings) out << "warning: " << w << "\n";
      ranking = std::move(result.ranking);
    }
    truncate_ranked(ranking, k);
    records.push_back(ranking_record(qid, route + (do_rerank ? "+rerank" : ""), ranking));
  }
  io::atomic_write(out_dir / "results.jsonl", io::to_jsonl(records));

  Manifest manifest{.command = "search", .config = &cfg};
  manifest.add_input("store", store_file);
  manifest.add_input("index", index_file);
  if (!query_file.empty()) manifest.add_input("queries", query_file);
  manifest.outputs = {"results.jsonl"};
  manifest.write(out_dir);
  out << "wrote " << records.size() << " result set(s)\n";
}

void cmd_agent_run(const PipelineConfig& cfg, const std::string& store_file,
                   const std::string& index_file, const std::string& route_base,
                   const fs::path& out_dir, std::ostream& out) {
  CorpusStore store = CorpusStore::load_snapshot(store_file);
  if (store.case_count() == 0) throw ValidationError("agent-run: store has no cases");

  LoadedIndexes indexes;
  std::unique_ptr<EmbeddingProvider> provider;
  if (route_base == "dense") {
    indexes.dense = DenseIndex::load(index_file);
    provider = make_provider(cfg.dense.provider);
  } else {
    indexes.sparse = SparseIndex::load(index_file);
  }
  Retriever retriever = make_retriever(route_base, cfg, indexes, provider.get());

  RetryPolicy retry{cfg.llm.max_retries, cfg.llm.base_delay_ms};
  auto planner = make_client(cfg.llm.planner, retry);
  auto selector = make_client(cfg.llm.selector, retry);
  auto scorer = make_pair_scorer(cfg.rerank.scorer);

  auto doc_text_of = [&store](const std::string& id) {
    const auto* doc = store.find_document(id);
    return doc == nullptr ? std::string{} : doc->title + " " + doc->text;
  };
  auto doc_title_of = [&store](const std::string& id) {
    const auto* doc = store.find_document(id);
    return doc == nullptr ? std::string{} : doc->title;
  };

  PlannerOptions planner_options{cfg.agent.m_max, cfg.agent.fallback_window};
  SelectorOptions selector_options{cfg.agent.n_min, cfg.agent.n_min_statutes,
                                   cfg.agent.n_min_precedents};
  DocKindLookup doc_kind_of = [&store](const std::string& id) -> std::optional<DocKind> {
    const auto* doc = store.find_document(id);
    if (doc == nullptr) return std::nullopt;
    return doc->kind;
  };
  SelectionRewardWeights sel_weights{cfg.agent.a, cfg.agent.b, cfg.agent.c, cfg.agent.l_target,
                                     cfg.agent.overage_cap};

  std::vector<json> agentic_records, standard_records, plan_records, selection_records,
      reward_records, prompt_records;

  for (const auto& rec : store.cases()) {
    QueryPlan plan = plan_queries(rec.id, rec.facts, planner.get(), planner_options);
    for (const auto& w : plan.warnings) out << "warning: " << rec.id << ": " << w << "\n";

    auto pool_result =
        multi_view_recall(plan, retriever, *scorer, cfg.agent.k_per_query, doc_text_of);
    for (const auto& w : pool_result.warnings) out << "warning: " << rec.id << ": " << w << "\n";
    const RankedList& pool = pool_result.ranking;

    SelectionResult selection;
    if (!pool.empty()) {
      selection = select_evidence(pool, rec.id, rec.facts, selector.get(), selector_options,
                                  doc_title_of, doc_kind_of);
      for (const auto& w : selection.warnings) out << "warning: " << rec.id << ": " << w << "\n";
    } else {
      selection.case_id = rec.id;
      selection.selector_id = "empty-pool";
    }

    // Agentic route ranking: selected ids first (selection order), then
    // the remaining pool in rerank order.
    RankedList agentic;
    {
      std::set<std::string> chosen(selection.selected_ids.begin(), selection.selected_ids.end());
      double top_score = pool.empty() ? 1.0 : pool.front().score;
      size_t n = 0;
      for (const auto& id : selection.selected_ids) {
        // Selected entries get synthetic descending scores above the pool.
        agentic.push_back({id, top_score + static_cast<double>(selection.selected_ids.size() - n)});
        ++n;
      }
      for (const auto& hit : pool) {
        if (!chosen.count(hit.doc_id)) agentic.push_back(hit);
      }
    }

    // Standard route: whole-facts retrieval, reranked.
    RankedList standard = retriever(rec.facts, cfg.rerank.depth);
    auto std_rerank = rerank(standard, rec.facts, *scorer, cfg.rerank.top_m, doc_text_of);
    standard = std::move(std_rerank.ranking);

    agentic_records.push_back(ranking_record(rec.id, "agentic", agentic));
    standard_records.push_back(ranking_record(rec.id, "standard", standard));
    plan_records.push_back(json{{"case_id", rec.id},
                                {"planner_id", plan.planner_id},
                                {"sub_queries", plan.sub_queries},
                                {"warnings", plan.warnings}});
    selection_records.push_back(json{{"case_id", rec.id},
                                     {"selector_id", selection.selector_id},
                                     {"selected_ids", selection.selected_ids},
                                     {"backfilled", selection.backfilled},
                                     {"pool_size", selection.pool_ids.size()},
                                     {"warnings", selection.warnings}});

    // Per-stage rewards against gold labels (the rollout export input).
    if (!rec.gold_evidence_ids.empty()) {
      json query_rewards = json::array();
      for (const auto& q : plan.sub_queries) {
        query_rewards.push_back(
            json{{"query", q},
                 {"reward", query_reward(q, retriever, rec.gold_evidence_ids, cfg.agent.alpha)}});
      }
      std::set<std::string> pool_gold;
      for (const auto& hit : pool) {
        if (rec.gold_evidence_ids.count(hit.doc_id)) pool_gold.insert(hit.doc_id);
      }
      double sel_reward = pool.empty() ? 0.0
                                       : selection_reward(selection, rec.gold_evidence_ids,
                                                          pool_gold, sel_weights);
      reward_records.push_back(json{{"case_id", rec.id},
                                    {"query_rewards", query_rewards},
                                    {"selection_reward", sel_reward},
                                    {"pool_gold", pool_gold.size()}});
    }

    // Generation prompt for the selected evidence.
    std::vector<std::pair<std::string, const LegalDocument*>> evidence;
    for (const auto& id : selection.selected_ids) {
      evidence.emplace_back(id, store.find_document(id));
    }
    prompt_records.push_back(json{
        {"case_id", rec.id},
        {"prompt", build_generation_prompt(rec.facts, evidence, kGenerationInstruction)}});
  }

  io::atomic_write(out_dir / "agentic.jsonl", io::to_jsonl(agentic_records));
  io::atomic_write(out_dir / "standard.jsonl", io::to_jsonl(standard_records));
  io::atomic_write(out_dir / "plans.jsonl", io::to_jsonl(plan_records));
  io::atomic_write(out_dir / "selection.jsonl", io::to_jsonl(selection_records));
  io::atomic_write(out_dir / "rewards.jsonl", io::to_jsonl(reward_records));
  io::atomic_write(out_dir / "prompts.jsonl", io::to_jsonl(prompt_records));

  Manifest manifest{.command = "agent-run", .config = &cfg};
  manifest.add_input("store", store_file);
  manifest.add_input("index", index_file);
  manifest.outputs = {"agentic.jsonl", "standard.jsonl", "plans.jsonl",
                      "selection.jsonl", "rewards.jsonl", "prompts.jsonl"};
  manifest.write(out_dir);
  out << "agent route complete for " << store.case_count() << " case(s)\n";
}

void cmd_agent_plan(const PipelineConfig& cfg, const std::string& store_file,
                    const fs::path& out_dir, std::ostream& out) {
  CorpusStore store = CorpusStore::load_snapshot(store_file);
  if (store.case_count() == 0) throw ValidationError("agent-plan: store has no cases");
  RetryPolicy retry{cfg.llm.max_retries, cfg.llm.base_delay_ms};
  auto planner = make_client(cfg.llm.planner, retry);
  PlannerOptions options{cfg.agent.m_max, cfg.agent.fallback_window};

  std::vector<json> records;
  for (const auto& rec : store.cases()) {
    QueryPlan plan = plan_queries(rec.id, rec.facts, planner.get(), options);
    for (const auto& w : plan.warnings) out << "warning: " << rec.id << ": " << w << "\n";
    records.push_back(json{{"case_id", rec.id},
                           {"planner_id", plan.planner_id},
                           {"sub_queries", plan.sub_queries},
                           {"warnings", plan.warnings}});
  }
  io::atomic_write(out_dir / "plans.jsonl", io::to_jsonl(records));
  Manifest manifest{.command = "agent-plan", .config = &cfg};
  manifest.add_input("store", store_file);
  manifest.outputs = {"plans.jsonl"};
  manifest.write(out_dir);
  out << "planned " << records.size() << " case(s)\n";
}

void cmd_agent_select(const PipelineConfig& cfg, const std::string& store_file,
                      const std::string& pool_file, const fs::path& out_dir, std::ostream& out) {
  CorpusStore store = CorpusStore::load_snapshot(store_file);
  RetryPolicy retry{cfg.llm.max_retries, cfg.llm.base_delay_ms};
  auto selector = make_client(cfg.llm.selector, retry);
  SelectorOptions options{cfg.agent.n_min, cfg.agent.n_min_statutes, cfg.agent.n_min_precedents};
  auto doc_title_of = [&store](const std::string& id) {
    const auto* doc = store.find_document(id);
    return doc == nullptr ? std::string{} : doc->title;
  };
  DocKindLookup doc_kind_of = [&store](const std::string& id) -> std::optional<DocKind> {
    const auto* doc = store.find_document(id);
    if (doc == nullptr) return std::nullopt;
    return doc->kind;
  };

  std::vector<json> records;
  io::for_each_jsonl(pool_file, [&](size_t, const json& rec) {
    std::string case_id = rec.at("case_id").get<std::string>();
    const CaseRecord* c = store.find_case(case_id);
    if (c == nullptr) throw ValidationError("agent-select: unknown case id '" + case_id + "'");
    RankedList pool = ranking_from_record(rec);
    if (pool.empty()) {
      records.push_back(json{{"case_id", case_id}, {"selector_id", "empty-pool"},
                             {"selected_ids", json::array()}, {"backfilled", false},
                             {"pool_size", 0}, {"warnings", json::array()}});
      return;
    }
    auto selection =
        select_evidence(pool, case_id, c->facts, selector.get(), options, doc_title_of,
                        doc_kind_of);
    for (const auto& w : selection.warnings) out << "warning: " << case_id << ": " << w << "\n";
    records.push_back(json{{"case_id", case_id},
                           {"selector_id", selection.selector_id},
                           {"selected_ids", selection.selected_ids},
                           {"backfilled", selection.backfilled},
                           {"pool_size", selection.pool_ids.size()},
                           {"warnings", selection.warnings}});
  });
  io::atomic_write(out_dir / "selection.jsonl", io::to_jsonl(records));
  Manifest manifest{.command = "agent-select", .config = &cfg};
  manifest.add_input("store", store_file);
  manifest.add_input("pool", pool_file);
  manifest.outputs = {"selection.jsonl"};
  manifest.write(out_dir);
  out << "selected for " << records.size() << " case(s)\n";
}

void cmd_fuse(const PipelineConfig& cfg, const std::vector<std::string>& run_files,
              const std::string& weight_spec, double k_rrf, size_t top_n, bool per_kind,
              const std::string& store_file, const fs::path& out_dir, std::ostream& out) {
  if (run_files.size() < 1) throw ValidationError("fuse: pass at least one --runs file");

  // Route weights, e.g. "agent=2.0,std=1.0". Aliases match the route ids
  // that agent-run writes.
  std::map<std::string, double> weights{{"agentic", cfg.fusion.w_agent},
                                        {"standard", cfg.fusion.w_std}};
  if (!weight_spec.empty()) {
    for (const auto& piece : split(weight_spec, ',')) {
      auto kv = split(piece, '=');
      if (kv.size() != 2) throw ValidationError("fuse: bad --weights entry '" + piece + "'");
      std::string key = std::string(trim(kv[0]));
      if (key == "agent") key = "agentic";
      if (key == "std") key = "standard";
      try {
        weights[key] = std::stod(kv[1]);
      } catch (...) {
        throw ValidationError("fuse: bad weight value in '" + piece + "'");
      }
    }
  }

  std::optional<CorpusStore> store;
  if (per_kind) {
    if (store_file.empty()) throw ValidationError("fuse: --per-kind needs --store");
    store = CorpusStore::load_snapshot(store_file);
  }

  // case_id -> route -> ranking
  std::map<std::string, std::map<std::string, RankedList>> by_case;
  Manifest manifest{.command = "fuse", .config = &cfg};
  for (const auto& file : run_files) {
    io::for_each_jsonl(file, [&](size_t, const json& rec) {
      by_case[rec.at("case_id").get<std::string>()][rec.at("route").get<std::string>()] =
          ranking_from_record(rec);
    });
    manifest.add_input(fs::path(file).filename().string(), file);
  }

  std::vector<json> fused_records;
  for (const auto& [case_id, routes] : by_case) {
    std::vector<RouteRanking> route_rankings;
    for (const auto& [route_id, ranking] : routes) {
      auto it = weights.find(route_id);
      if (it == weights.end()) {
        throw ValidationError("fuse: no weight configured for route '" + route_id + "'");
      }
      route_rankings.push_back({route_id, it->second, ranking});
    }
    RankedList fused;
    if (per_kind) {
      // Fuse statutes and precedents independently, then merge by score.
      for (DocKind kind : {DocKind::Statute, DocKind::Precedent}) {
        std::vector<RouteRanking> filtered;
        for (const auto& rr : route_rankings) {
          RouteRanking copy{rr.route_id, rr.weight, {}};
          for (const auto& item : rr.ranking) {
            const auto* doc = store->find_document(item.doc_id);
            if (doc != nullptr && doc->kind == kind) copy.ranking.push_back(item);
          }
          if (!copy.ranking.empty()) filtered.push_back(std::move(copy));
        }
        if (filtered.empty()) continue;
        auto part = fuse_rrf(filtered, k_rrf, top_n);
        fused.insert(fused.end(), part.begin(), part.end());
      }
      sort_ranked(fused);
      truncate_ranked(fused, top_n);
    } else {
      fused = fuse_rrf(route_rankings, k_rrf, top_n);
    }
    fused_records.push_back(ranking_record(case_id, "fused", fused));
  }
  io::atomic_write(out_dir / "fused.jsonl", io::to_jsonl(fused_records));
  manifest.outputs = {"fused.jsonl"};
  manifest.write(out_dir);
  out << "fused " << fused_records.size() << " case(s)\n";
}

void cmd_mine_triples(const PipelineConfig& cfg, const std::string& store_file,
                      const fs::path& out_dir, std::ostream& out) {
  CorpusStore store = CorpusStore::load_snapshot(store_file);
  auto base = make_provider(cfg.dense.provider);
  std::vector<std::unique_ptr<EmbeddingProvider>> providers;
  std::vector<EmbeddingProvider*> raw;
  for (size_t i = 0; i < cfg.mining.k_folds; ++i) {
    providers.push_back(
        std::make_unique<HashEmbeddingProvider>(base->dimension(), "fold" + std::to_string(i)));
    raw.push_back(providers.back().get());
  }
  auto report = mine_triples_kfold(store, static_cast<uint32_t>(cfg.mining.k_folds), raw,
                                   cfg.mining.n_neg, cfg.mining.depth);
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  io::atomic_write(out_dir / "triples.jsonl", triples_to_jsonl(report.triples));

  Manifest manifest{.command = "mine-triples", .config = &cfg};
  manifest.add_input("store", store_file);
  manifest.outputs = {"triples.jsonl"};
  manifest.write(out_dir);
  out << "mined " << report.triples.size() << " triple(s) across " << cfg.mining.k_folds
      << " folds\n";
}

void cmd_score_judgment(const PipelineConfig& cfg, const std::string& cand_file,
                        const std::string& case_id, const std::string& store_file, bool breakdown,
                        const std::string& out_dir, std::ostream& out) {
  CorpusStore store = CorpusStore::load_snapshot(store_file);
  const CaseRecord* gold = store.find_case(case_id);
  if (gold == nullptr) throw ValidationError("score-judgment: unknown case id '" + case_id + "'");
  std::string cand_text = io::read_file(cand_file);

  auto scorer = make_similarity_scorer(cfg.reward.similarity);
  RewardBreakdown result = total_reward(cand_text, *gold, rubric_config_of(cfg), *scorer);

  json record{{"case_id", case_id},
              {"total", result.total},
              {"scorer_id", scorer->scorer_id()}};
  if (breakdown) {
    record["r_legal"] = result.r_legal;
    record["r_struct"] = result.r_struct;
    record["r_logic"] = result.r_logic;
    record["weights"] = {result.weights.legal, result.weights.structure, result.weights.logic};
    record["diagnostics"] = result.diagnostics;
  }
  out << record.dump(2) << "\n";
  if (!out_dir.empty()) {
    fs::path dir(out_dir);
    io::atomic_write(dir / "score.json", record.dump(2) + "\n");
    Manifest manifest{.command = "score-judgment", .config = &cfg};
    manifest.add_input("candidate", cand_file);
    manifest.add_input("store", store_file);
    manifest.outputs = {"score.json"};
    manifest.write(dir);
  }
}

void cmd_grpo_train(const PipelineConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  ToyTask task = default_toy_task();
  task.rubric = rubric_config_of(cfg);
  task.rubric.pattern_set = "synthetic";  // the toy grammar is synthetic by construction

  ToyTrainConfig train_config;
  train_config.group_size = cfg.grpo.group_size;
  train_config.epsilon = cfg.grpo.epsilon;
  train_config.iterations = cfg.grpo.iterations;
  train_config.seed = cfg.grpo.seed;
  train_config.grpo = {cfg.grpo.learning_rate, cfg.grpo.kl_beta, cfg.grpo.clip_ratio};

  TrainResult result = train_toy(task, train_config);
  std::vector<json> trace;
  for (const auto& row : result.trace) {
    trace.push_back(json{{"iteration", row.iteration},
                         {"mean_reward", row.mean_reward},
                         {"kl", row.kl},
                         {"std_advantage", row.std_advantage}});
    out << "iter " << row.iteration << " mean_reward " << format_double(row.mean_reward) << " kl "
        << format_double(row.kl) << " std_advantage " << format_double(row.std_advantage) << "\n";
  }
  if (result.diverged) out << "training diverged (non-finite mean reward)\n";

  io::atomic_write(out_dir / "trace.jsonl", io::to_jsonl(trace));

  json policy_dump;
  for (size_t s = 0; s < result.policy.slot_count(); ++s) {
    policy_dump[task.slots[s].name] = {{"logits", result.policy.logits()[s]},
                                       {"probs", result.policy.probs(s)}};
  }
  io::atomic_write(out_dir / "policy.json", policy_dump.dump(2) + "\n");

  // Final-iteration rollouts in the shared export format.
  uint64_t final_seed =
      fnv1a64("iter:" + std::to_string(train_config.iterations), train_config.seed);
  auto samples = sample_group(result.policy, task, train_config.group_size, final_seed);
  TokenF1Scorer scorer;
  std::vector<double> rewards;
  for (const auto& s : samples) {
    rewards.push_back(total_reward(s.text, task.gold, task.rubric, scorer).total);
  }
  auto group = make_rollout_group(task.input_id, samples, rewards, train_config.epsilon);
  std::vector<json> rollouts;
  for (size_t i = 0; i < group.candidates.size(); ++i) {
    rollouts.push_back(json{{"input_id", group.input_id},
                            {"stage", "generate"},
                            {"sample_index", i},
                            {"candidate", group.candidates[i].text},
                            {"reward", group.rewards[i]},
                            {"advantage", group.advantages[i]},
                            {"log_prob", group.candidates[i].log_prob},
                            {"group_size", group.candidates.size()}});
  }
  io::atomic_write(out_dir / "rollouts.jsonl", io::to_jsonl(rollouts));

  Manifest manifest{.command = "grpo-train", .config = &cfg, .seed = cfg.grpo.seed};
  manifest.outputs = {"trace.jsonl", "policy.json", "rollouts.jsonl"};
  manifest.write(out_dir);
  if (!result.trace.empty()) {
    out << "final mean reward " << format_double(result.trace.back().mean_reward) << "\n";
  }
}

void cmd_eval_retrieval(const PipelineConfig& cfg, const std::string& runs_file,
                        const std::string& store_file, const std::vector<size_t>& cutoffs,
                        const fs::path& out_dir, std::ostream& out) {
  CorpusStore store = CorpusStore::load_snapshot(store_file);

  std::vector<std::string> case_ids;
  std::vector<RankedList> rankings;
  std::vector<std::set<std::string>> golds;
  RetrievalEvaluator streaming(cutoffs);
  io::for_each_jsonl(runs_file, [&](size_t, const json& rec) {
    std::string case_id = rec.at("case_id").get<std::string>();
    const CaseRecord* c = store.find_case(case_id);
    if (c == nullptr) throw ValidationError("eval-retrieval: unknown case id '" + case_id + "'");
    RankedList ranking = ranking_from_record(rec);
    streaming.add_case(case_id, ranking, c->gold_evidence_ids);
    case_ids.push_back(case_id);
    rankings.push_back(std::move(ranking));
    golds.push_back(c->gold_evidence_ids);
  });

  MetricReport report = streaming.finish();
  MetricReport batch = RetrievalEvaluator::evaluate_batch(cutoffs, case_ids, rankings, golds);
  if (!(report == batch)) {
    throw std::logic_error("eval-retrieval: streaming and batch paths disagree");
  }
  for (const auto& note : report.notes) out << "note: " << note << "\n";

  json root;
  root["case_count"] = report.case_count;
  root["macro"] = report.macro;
  root["micro"] = report.micro;
  json cases = json::array();
  for (size_t i = 0; i < report.case_ids.size(); ++i) {
    json row{{"case_id", report.case_ids[i]}};
    for (const auto& [metric, values] : report.per_case) row[metric] = values[i];
    cases.push_back(std::move(row));
  }
  root["cases"] = cases;
  root["notes"] = report.notes;
  io::atomic_write(out_dir / "report.json", root.dump(2) + "\n");

  Manifest manifest{.command = "eval-retrieval", .config = &cfg};
  manifest.add_input("runs", runs_file);
  manifest.add_input("store", store_file);
  manifest.outputs = {"report.json"};
  manifest.write(out_dir);

  out << "cases: " << report.case_count << "\n";
  for (const auto& [metric, value] : report.macro) {
    out << "  " << metric << " = " << format_double(value) << "\n";
  }
}

void cmd_eval_generation(const PipelineConfig& cfg, const std::string& cands_file,
                         const std::string& store_file, const fs::path& out_dir,
                         std::ostream& out) {
  CorpusStore store = CorpusStore::load_snapshot(store_file);
  PatternSet patterns = PatternSet::resolve(cfg.reward.pattern_set);
  auto scorer = make_similarity_scorer(cfg.reward.similarity);

  json cases = json::array();
  std::map<std::string, double> sums;
  size_t n = 0;
  io::for_each_jsonl(cands_file, [&](size_t, const json& rec) {
    std::string case_id = rec.at("case_id").get<std::string>();
    const CaseRecord* c = store.find_case(case_id);
    if (c == nullptr) throw ValidationError("eval-generation: unknown case id '" + case_id + "'");
    JudgmentExtract cand = parse_judgment(rec.at("text").get<std::string>(), patterns);
    JudgmentExtract gold = gold_extract(*c, patterns);

    auto [prison, fine] = penalty_accuracy(cand, gold);
    Prf convicting = set_prf(cand.charges, gold.charges);
    Prf referencing = set_prf(cand.statute_ids, gold.statute_ids);
    SectionScores sections = section_similarity(cand, gold, *scorer);

    json row{{"case_id", case_id},
             {"penalty_prison", prison},
             {"penalty_fine", fine},
             {"convicting_recall", convicting.recall},
             {"convicting_precision", convicting.precision},
             {"convicting_f1", convicting.f1},
             {"referencing_recall", referencing.recall},
             {"referencing_precision", referencing.precision},
             {"referencing_f1", referencing.f1},
             {"reasoning_similarity", sections.reasoning},
             {"judgment_similarity", sections.judgment}};
    for (auto& [key, value] : row.items()) {
      if (key != "case_id") sums[key] += value.get<double>();
    }
    cases.push_back(std::move(row));
    ++n;
  });

  json root;
  root["scorer_id"] = scorer->scorer_id();
  root["case_count"] = n;
  root["cases"] = cases;
  json macro;
  for (const auto& [key, sum] : sums) macro[key] = n ? sum / static_cast<double>(n) : 0.0;
  root["macro"] = macro;
  io::atomic_write(out_dir / "report.json", root.dump(2) + "\n");

  Manifest manifest{.command = "eval-generation", .config = &cfg};
  manifest.add_input("candidates", cands_file);
  manifest.add_input("store", store_file);
  manifest.outputs = {"report.json"};
  manifest.write(out_dir);

  out << "cases: " << n << "\n";
  for (const auto& [key, value] : macro.items()) {
    out << "  " << key << " = " << format_double(value.get<double>()) << "\n";
  }
}

void cmd_export_rollouts(const PipelineConfig& cfg, const std::string& agent_dir,
                         const fs::path& out_dir, std::ostream& out) {
  fs::path rewards_file = fs::path(agent_dir) / "rewards.jsonl";
  std::vector<json> rollouts;
  io::for_each_jsonl(rewards_file, [&](size_t, const json& rec) {
    std::string case_id = rec.at("case_id").get<std::string>();
    std::vector<double> rewards;
    std::vector<std::string> queries;
    for (const auto& qr : rec.at("query_rewards")) {
      queries.push_back(qr.at("query").get<std::string>());
      rewards.push_back(qr.at("reward").get<double>());
    }
    std::vector<double> advantages(rewards.size(), 0.0);
    if (rewards.size() >= 2) advantages = compute_advantages(rewards, cfg.grpo.epsilon);
    for (size_t i = 0; i < queries.size(); ++i) {
      json row{{"input_id", case_id}, {"stage", "querygen"},   {"sample_index", i},
               {"candidate", queries[i]}, {"reward", rewards[i]}, {"group_size", queries.size()}};
      if (rewards.size() >= 2) {
        row["advantage"] = advantages[i];
      } else {
        row["advantage"] = nullptr;
      }
      rollouts.push_back(std::move(row));
    }
    rollouts.push_back(json{{"input_id", case_id},
                            {"stage", "select"},
                            {"sample_index", 0},
                            {"candidate", ""},
                            {"reward", rec.at("selection_reward").get<double>()},
                            {"advantage", nullptr},
                            {"group_size", 1}});
  });
  io::atomic_write(out_dir / "rollouts.jsonl", io::to_jsonl(rollouts));

  Manifest manifest{.command = "export-rollouts", .config = &cfg};
  manifest.add_input("rewards", rewards_file);
  manifest.outputs = {"rollouts.jsonl"};
  manifest.write(out_dir);
  out << "exported " << rollouts.size() << " rollout record(s)\n";
}

void cmd_make_fixture(const PipelineConfig& cfg, size_t topics, size_t cases,
                      const fs::path& out_dir, std::ostream& out) {
  FixtureSpec spec;
  spec.n_topics = topics;
  spec.n_cases = cases;
  write_fixture_files(out_dir, spec);
  Manifest manifest{.command = "make-fixture", .config = &cfg};
  manifest.outputs = {"corpus.jsonl", "cases.jsonl"};
  manifest.write(out_dir);
  out << "fixture: " << topics * 5 << " statutes, " << cases << " cases\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"judgefuse: hybrid legal-evidence retrieval, rubric scoring, and GRPO tooling"};
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("--config", config_file, "pipeline config file (json)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "validate and snapshot a corpus plus cases");
  std::string corpus_file, case_file, out_dir;
  ingest->add_option("--corpus", corpus_file, "corpus jsonl")->required();
  ingest->add_option("--cases", case_file, "case jsonl");
  ingest->add_option("--out", out_dir, "output directory")->required();

  // build-index
  auto* build = app.add_subcommand("build-index", "build retrieval indexes from a snapshot");
  bool build_sparse = false, build_dense = false;
  std::string store_file;
  build->add_flag("--sparse", build_sparse, "build the sparse index");
  build->add_flag("--dense", build_dense, "build the dense index");
  build->add_option("--store", store_file, "store snapshot")->required();
  build->add_option("--out", out_dir, "output directory")->required();

  // search
  auto* search = app.add_subcommand("search", "query one retrieval route");
  std::string route = "sparse", index_file, query, query_file;
  size_t k = 10;
  bool do_rerank = false;
  search->add_option("--route", route, "sparse|tfidf|dense");
  search->add_option("--store", store_file, "store snapshot")->required();
  search->add_option("--index", index_file, "index file")->required();
  search->add_option("--query", query, "inline query text");
  search->add_option("--query-file", query_file, "jsonl with id+query records");
  search->add_option("--k", k, "results per query");
  search->add_flag("--rerank", do_rerank, "apply the second-stage scorer");
  search->add_option("--out", out_dir, "output directory")->required();

  // agent-run
  auto* agent = app.add_subcommand("agent-run", "plan, recall, rerank and select per case");
  std::string route_base = "sparse";
  agent->add_option("--store", store_file, "store snapshot")->required();
  agent->add_option("--index", index_file, "base index file")->required();
  agent->add_option("--route-base", route_base, "sparse|tfidf|dense");
  agent->add_option("--out", out_dir, "output directory")->required();

  // agent-plan
  auto* plan_cmd = app.add_subcommand("agent-plan", "decompose case facts into sub-queries");
  plan_cmd->add_option("--store", store_file, "store snapshot")->required();
  plan_cmd->add_option("--out", out_dir, "output directory")->required();

  // agent-select
  auto* select_cmd = app.add_subcommand("agent-select", "select evidence from candidate pools");
  std::string pool_file;
  select_cmd->add_option("--store", store_file, "store snapshot")->required();
  select_cmd->add_option("--pool", pool_file, "candidate pool run file (jsonl rankings)")
      ->required();
  select_cmd->add_option("--out", out_dir, "output directory")->required();

  // fuse
  auto* fuse = app.add_subcommand("fuse", "weighted reciprocal rank fusion of route runs");
  std::vector<std::string> run_files;
  std::string weight_spec;
  double k_rrf = 0;  // 0 = take from config
  size_t top_n = 0;
  bool per_kind = false;
  fuse->add_option("--runs", run_files, "route run files")->required();
  fuse->add_option("--weights", weight_spec, "route weights, e.g. agent=2.0,std=1.0");
  fuse->add_option("--k-rrf", k_rrf, "rrf constant");
  fuse->add_option("--top-n", top_n, "fused list depth");
  fuse->add_flag("--per-kind", per_kind, "fuse statutes and precedents separately");
  fuse->add_option("--store", store_file, "store snapshot (required with --per-kind)");
  fuse->add_option("--out", out_dir, "output directory")->required();

  // mine-triples
  auto* mine = app.add_subcommand("mine-triples", "k-fold hard-negative mining export");
  mine->add_option("--store", store_file, "store snapshot")->required();
  size_t k_folds_flag = 0, n_neg_flag = 0, depth_flag = 0;
  mine->add_option("--k-folds", k_folds_flag, "fold count");
  mine->add_option("--n-neg", n_neg_flag, "negatives per query");
  mine->add_option("--depth", depth_flag, "retrieval depth");
  mine->add_option("--out", out_dir, "output directory")->required();

  // score-judgment
  auto* score = app.add_subcommand("score-judgment", "rubric-score one candidate judgment");
  std::string cand_file, gold_case_id, score_out;
  bool breakdown = false;
  score->add_option("--cand", cand_file, "candidate text file")->required();
  score->add_option("--gold", gold_case_id, "gold case id")->required();
  score->add_option("--store", store_file, "store snapshot")->required();
  score->add_flag("--breakdown", breakdown, "emit per-component scores");
  score->add_option("--out", score_out, "optional output directory");

  // grpo-train
  auto* train = app.add_subcommand("grpo-train", "train the toy policy with the rubric reward");
  bool toy = false;
  size_t iters_flag = 0, group_flag = 0;
  double kl_beta_flag = -1, lr_flag = -1;
  int64_t seed_flag = -1;
  train->add_flag("--toy", toy, "use the bundled synthetic task");
  train->add_option("--iters", iters_flag, "iterations");
  train->add_option("--group", group_flag, "group size G");
  train->add_option("--kl-beta", kl_beta_flag, "kl penalty");
  train->add_option("--lr", lr_flag, "learning rate");
  train->add_option("--seed", seed_flag, "rng seed");
  train->add_option("--out", out_dir, "output directory")->required();

  // eval-retrieval
  auto* evalr = app.add_subcommand("eval-retrieval", "retrieval metrics for a run file");
  std::string runs_file, ks_spec = "5,10";
  evalr->add_option("--runs", runs_file, "run file (jsonl rankings)")->required();
  evalr->add_option("--store", store_file, "store snapshot")->required();
  evalr->add_option("--ks", ks_spec, "cutoffs, e.g. 5,10");
  evalr->add_option("--out", out_dir, "output directory")->required();

  // eval-generation
  auto* evalg = app.add_subcommand("eval-generation", "generation metrics for candidates");
  std::string cands_file;
  evalg->add_option("--cands", cands_file, "jsonl with case_id+text")->required();
  evalg->add_option("--store", store_file, "store snapshot")->required();
  evalg->add_option("--out", out_dir, "output directory")->required();

  // export-rollouts
  auto* exportr = app.add_subcommand("export-rollouts", "rollout records for external trainers");
  std::string agent_dir;
  exportr->add_option("--from", agent_dir, "agent-run output directory")->required();
  exportr->add_option("--out", out_dir, "output directory")->required();

  // make-fixture
  auto* fixture = app.add_subcommand("make-fixture", "write the synthetic benchmark fixture");
  size_t fixture_topics = 40, fixture_cases = 50;
  fixture->add_option("--topics", fixture_topics, "topic count (5 statutes each)");
  fixture->add_option("--cases", fixture_cases, "case count");
  fixture->add_option("--out", out_dir, "output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    PipelineConfig cfg =
        config_file.empty() ? PipelineConfig{} : PipelineConfig::from_file(config_file);

    // Flag overrides beat config values.
    if (fuse->parsed()) {
      if (k_rrf <= 0) k_rrf = cfg.fusion.k_rrf;
      if (top_n == 0) top_n = cfg.fusion.top_n;
    }
    if (mine->parsed()) {
      if (k_folds_flag > 0) cfg.mining.k_folds = k_folds_flag;
      if (n_neg_flag > 0) cfg.mining.n_neg = n_neg_flag;
      if (depth_flag > 0) cfg.mining.depth = depth_flag;
      cfg.validate();
    }
    if (train->parsed()) {
      if (!toy) throw ValidationError("grpo-train: only --toy mode is available");
      if (iters_flag > 0) cfg.grpo.iterations = iters_flag;
      if (group_flag > 0) cfg.grpo.group_size = group_flag;
      if (kl_beta_flag >= 0) cfg.grpo.kl_beta = kl_beta_flag;
      if (lr_flag >= 0) cfg.grpo.learning_rate = lr_flag;
      if (seed_flag >= 0) cfg.grpo.seed = static_cast<uint64_t>(seed_flag);
      cfg.validate();
    }

    if (ingest->parsed()) {
      cmd_ingest(cfg, corpus_file, case_file, out_dir, out);
    } else if (build->parsed()) {
      cmd_build_index(cfg, build_sparse, build_dense, store_file, out_dir, out);
    } else if (search->parsed()) {
      cmd_search(cfg, route, store_file, index_file, query, query_file, k, do_rerank, out_dir,
                 out);
    } else if (agent->parsed()) {
      cmd_agent_run(cfg, store_file, index_file, route_base, out_dir, out);
    } else if (plan_cmd->parsed()) {
      cmd_agent_plan(cfg, store_file, out_dir, out);
    } else if (select_cmd->parsed()) {
      cmd_agent_select(cfg, store_file, pool_file, out_dir, out);
    } else if (fuse->parsed()) {
      cmd_fuse(cfg, run_files, weight_spec, k_rrf, top_n, per_kind, store_file, out_dir, out);
    } else if (mine->parsed()) {
      cmd_mine_triples(cfg, store_file, out_dir, out);
    } else if (score->parsed()) {
      cmd_score_judgment(cfg, cand_file, gold_case_id, store_file, breakdown, score_out, out);
    } else if (train->parsed()) {
      cmd_grpo_train(cfg, out_dir, out);
    } else if (evalr->parsed()) {
      std::vector<size_t> cutoffs;
      for (const auto& piece : split(ks_spec, ',')) {
        cutoffs.push_back(std::stoul(std::string(trim(piece))));
      }
      cmd_eval_retrieval(cfg, runs_file, store_file, cutoffs, out_dir, out);
    } else if (evalg->parsed()) {
      cmd_eval_generation(cfg, cands_file, store_file, out_dir, out);
    } else if (exportr->parsed()) {
      cmd_export_rollouts(cfg, agent_dir, out_dir, out);
    } else if (fixture->parsed()) {
      cmd_make_fixture(cfg, fixture_topics, fixture_cases, out_dir, out);
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const BackendError& e) {
    err << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace jf::cli
