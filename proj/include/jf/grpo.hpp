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
#include <string>
#include <vector>

#include "jf/corpus.hpp"
#include "jf/exec.hpp"
#include "jf/rubric.hpp"

namespace jf {

// A_i = (r_i - mean) / (population std + epsilon). An equal-reward group
// yields all zeros. Requires G >= 2.
std::vector<double> compute_advantages(const std::vector<double>& rewards, double epsilon);

// One categorical choice per template slot; options carry the text that
// renders into the judgment.
struct ToySlot {
  std::string name;
  std::vector<std::string> options;
};

// A generation task whose rubric reward is exactly computable: the
// synthetic grammar renders slot choices into a judgment document that
// the rubric's parser reads back losslessly, so reward 1.0 is achievable
// by construction (the all-gold choice).
struct ToyTask {
  std::string input_id;
  std::vector<ToySlot> slots;
  std::vector<size_t> gold_choice;
  CaseRecord gold;
  RubricConfig rubric;

  std::string render(const std::vector<size_t>& choices) const;
};

// The bundled task used by `grpo-train --toy`: five two-way slots
// (statute pair, charge, prison term, fine, reasoning-trace band).
ToyTask default_toy_task();

// Slot-factorized categorical policy with a frozen reference copy for KL
// anchoring.
class ToyPolicy {
 public:
  explicit ToyPolicy(std::vector<size_t> slot_sizes);

  size_t slot_count() const { return logits_.size(); }
  size_t options_in(size_t slot) const { return logits_[slot].size(); }
  const std::vector<std::vector<double>>& logits() const { return logits_; }
  std::vector<std::vector<double>>& mutable_logits() { return logits_; }

  std::vector<double> probs(size_t slot) const;
  std::vector<double> reference_probs(size_t slot) const;
  double log_prob(const std::vector<size_t>& choices) const;

  // Sum of per-slot KL(current || reference).
  double kl_to_reference() const;
  // Total variation distance, summed over slots.
  double tv_to_reference() const;

  void freeze_reference();  // snapshots current parameters as reference

 private:
  std::vector<std::vector<double>> logits_;
  std::vector<std::vector<double>> ref_logits_;
};

struct ToySample {
  std::vector<size_t> choices;
  double log_prob = 0.0;  // at sampling time
  std::string text;
};

// G i.i.d. samples, rendered through the task grammar. Reproducible: the
// i-th candidate draws from an engine seeded by (seed, i), so results do
// not depend on scheduling.
std::vector<ToySample> sample_group(const ToyPolicy& policy, const ToyTask& task, size_t group_size,
                                    uint64_t seed, ExecPolicy policy_exec = ExecPolicy::Parallel);

struct RolloutGroup {
  std::string input_id;
  std::vector<ToySample> candidates;
  std::vector<double> rewards;
  std::vector<double> advantages;
  double group_mean = 0.0;
  double group_std = 0.0;
};

RolloutGroup make_rollout_group(const std::string& input_id, std::vector<ToySample> candidates,
                                std::vector<double> rewards, double epsilon);

struct GrpoOptions {
  double learning_rate = 0.3;
  double kl_beta = 0.05;
  double clip_ratio = 0.0;  // 0 disables PPO-style ratio clipping
};

struct GrpoStepReport {
  double mean_reward = 0.0;
  double mean_abs_advantage = 0.0;
  double kl = 0.0;  // KL(policy || reference) before the update
  bool aborted = false;
  std::string abort_reason;
};

// Mean over candidates of A_i * log pi(candidate_i) minus
// kl_beta * KL(pi || ref). Exposed so tests can check the analytic
// gradient against finite differences of the same scalar.
double surrogate_objective(const ToyPolicy& policy, const std::vector<RolloutGroup>& groups,
                           double kl_beta, double clip_ratio = 0.0);

std::vector<std::vector<double>> surrogate_gradient(const ToyPolicy& policy,
                                                    const std::vector<RolloutGroup>& groups,
                                                    double kl_beta, double clip_ratio = 0.0);

// One gradient-ascent step on the surrogate. A non-finite gradient aborts
// the step (parameters untouched) and reports why.
GrpoStepReport grpo_step(ToyPolicy& policy, const std::vector<RolloutGroup>& groups,
                         const GrpoOptions& options);

struct ToyTrainConfig {
  size_t group_size = 16;
  double epsilon = 1e-6;
  size_t iterations = 200;
  uint64_t seed = 7;
  GrpoOptions grpo;
};

struct TrainIteration {
  size_t iteration = 0;
  double mean_reward = 0.0;
  double kl = 0.0;
  double std_advantage = 0.0;
};

struct TrainResult {
  std::vector<TrainIteration> trace;
  ToyPolicy policy;
  bool diverged = false;
};

// Samples a group per iteration, scores it with the rubric oracle,
// normalizes to advantages and steps the policy. Deterministic under
// seed. NaN mean reward aborts with the trace captured so far.
TrainResult train_toy(const ToyTask& task, const ToyTrainConfig& config);

}  // namespace jf
