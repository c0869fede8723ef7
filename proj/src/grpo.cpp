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
#include "jf/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "jf/util.hpp"

namespace jf {

namespace {

std::vector<double> softmax(const std::vector<double>& logits) {
  double max_logit = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

double kl_categorical(const std::vector<double>& p, const std::vector<double>& q) {
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0) kl += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return kl;
}

}  // namespace

std::vector<double> compute_advantages(const std::vector<double>& rewards, double epsilon) {
  if (rewards.size() < 2) throw ValidationError("compute_advantages: group size must be >= 2");
  if (!(epsilon > 0)) throw ValidationError("compute_advantages: epsilon must be > 0");
  std::vector<double> advantages(rewards.size(), 0.0);
  // Degenerate group: identical rewards carry no preference signal. The
  // explicit check avoids rounding residue from mean subtraction.
  bool all_equal = true;
  for (double r : rewards) all_equal = all_equal && (r == rewards[0]);
  if (all_equal) return advantages;

  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());  // population variance
  double std_dev = std::sqrt(var);
  for (size_t i = 0; i < rewards.size(); ++i) {
    advantages[i] = (rewards[i] - mean) / (std_dev + epsilon);
  }
  return advantages;
}

std::string ToyTask::render(const std::vector<size_t>& choices) const {
  if (choices.size() != slots.size()) {
    throw ValidationError("render: expected " + std::to_string(slots.size()) + " choices");
  }
  std::vector<std::string> parts(slots.size());
  for (size_t s = 0; s < slots.size(); ++s) {
    if (choices[s] >= slots[s].options.size()) {
      throw ValidationError("render: choice out of range for slot " + slots[s].name);
    }
    parts[s] = slots[s].options[choices[s]];
  }
  // Slot order: statutes, charge, prison, fine, trace.
  std::string text;
  text += "<think> " + parts[4] + " </think>\n";
  text += "[REASONING] Upon review of the established facts the court finds the cited "
          "provisions applicable: " +
          parts[0] + " and the accusation " + parts[1] +
          " is supported by the evidence on record. [/REASONING]\n";
  text += "[JUDGMENT] [VERDICT:conviction] The defendant is sentenced per " + parts[2] + " " +
          parts[3] + " as ordered. [/JUDGMENT]\n";
  return text;
}

ToyTask default_toy_task() {
  ToyTask task;
  task.input_id = "toy-1";

  task.slots = {
      {"statutes", {"[LAW:L101] [LAW:L102]", "[LAW:L103] [LAW:L104]"}},
      {"charge", {"[CHARGE:theft]", "[CHARGE:arson]"}},
      {"prison", {"[PRISON:18]", "[PRISON:3]"}},
      {"fine", {"[FINE:5000]", "[FINE:500]"}},
      {"trace", {"", "the court closed review quickly"}},
  };
  // A long, trigram-distinct reasoning trace lands in the top length band.
  std::string trace;
  for (int i = 0; i < 150; ++i) {
    trace += "step" + std::to_string(i) + " ";
  }
  task.slots[4].options[0] = trace + "conclusion follows";
  task.gold_choice = {0, 0, 0, 0, 0};

  task.gold.id = task.input_id;
  task.gold.facts =
      "The defendant entered the warehouse at night and removed stored goods valued above "
      "the statutory threshold.";
  task.gold.gold_evidence_ids = {"L101", "L102"};
  task.gold.gold_charges = {"theft"};
  task.gold.gold_prison_months = 18;
  task.gold.gold_fine_amount = 5000.0;
  task.gold.gold_verdict = Verdict::Conviction;
  task.gold.gold_judgment_text = task.render(task.gold_choice);

  task.rubric.pattern_set = "synthetic";
  return task;
}

ToyPolicy::ToyPolicy(std::vector<size_t> slot_sizes) {
  for (size_t n : slot_sizes) {
    if (n < 1) throw ValidationError("ToyPolicy: slot needs at least one option");
    logits_.emplace_back(n, 0.0);
  }
  ref_logits_ = logits_;
}

std::vector<double> ToyPolicy::probs(size_t slot) const { return softmax(logits_[slot]); }

std::vector<double> ToyPolicy::reference_probs(size_t slot) const {
  return softmax(ref_logits_[slot]);
}

double ToyPolicy::log_prob(const std::vector<size_t>& choices) const {
  double lp = 0.0;
  for (size_t s = 0; s < logits_.size(); ++s) {
    auto p = probs(s);
    lp += std::log(p[choices[s]]);
  }
  return lp;
}

double ToyPolicy::kl_to_reference() const {
  double kl = 0.0;
  for (size_t s = 0; s < logits_.size(); ++s) {
    kl += kl_categorical(probs(s), reference_probs(s));
  }
  return kl;
}

double ToyPolicy::tv_to_reference() const {
  double tv = 0.0;
  for (size_t s = 0; s < logits_.size(); ++s) {
    auto p = probs(s);
    auto q = reference_probs(s);
    double d = 0.0;
    for (size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    tv += 0.5 * d;
  }
  return tv;
}

void ToyPolicy::freeze_reference() { ref_logits_ = logits_; }

std::vector<ToySample> sample_group(const ToyPolicy& policy, const ToyTask& task,
                                    size_t group_size, uint64_t seed, ExecPolicy policy_exec) {
  if (group_size < 2) throw ValidationError("sample_group: group size must be >= 2");
  if (policy.slot_count() != task.slots.size()) {
    throw ValidationError("sample_group: policy and task disagree on slot count");
  }
  std::vector<std::vector<double>> probs(policy.slot_count());
  for (size_t s = 0; s < policy.slot_count(); ++s) probs[s] = policy.probs(s);

  std::vector<ToySample> samples(group_size);
  parallel_for(policy_exec, group_size, [&](size_t i) {
    // Per-candidate engine keyed by (seed, i): identical output whether
    // the loop runs serial or parallel.
    std::mt19937_64 rng(fnv1a64("sample:" + std::to_string(i), seed ^ 0x9e3779b97f4a7c15ULL));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    ToySample sample;
    sample.choices.resize(probs.size());
    double lp = 0.0;
    for (size_t s = 0; s < probs.size(); ++s) {
      double u = uniform(rng);
      double acc = 0.0;
      size_t choice = probs[s].size() - 1;
      for (size_t k = 0; k < probs[s].size(); ++k) {
        acc += probs[s][k];
        if (u < acc) {
          choice = k;
          break;
        }
      }
      sample.choices[s] = choice;
      lp += std::log(probs[s][choice]);
    }
    sample.log_prob = lp;
    sample.text = task.render(sample.choices);
    samples[i] = std::move(sample);
  });
  return samples;
}

RolloutGroup make_rollout_group(const std::string& input_id, std::vector<ToySample> candidates,
                                std::vector<double> rewards, double epsilon) {
  if (candidates.size() != rewards.size()) {
    throw ValidationError("make_rollout_group: candidate/reward count mismatch");
  }
  RolloutGroup group;
  group.input_id = input_id;
  group.candidates = std::move(candidates);
  group.rewards = std::move(rewards);
  group.advantages = compute_advantages(group.rewards, epsilon);
  double mean = 0.0;
  for (double r : group.rewards) mean += r;
  mean /= static_cast<double>(group.rewards.size());
  double var = 0.0;
  for (double r : group.rewards) var += (r - mean) * (r - mean);
  group.group_mean = mean;
  group.group_std = std::sqrt(var / static_cast<double>(group.rewards.size()));
  return group;
}

namespace {

// Per-candidate clipped weight on the policy-gradient term. With a single
// update per rollout the ratio is 1 and this reduces to plain A_i.
double clipped_factor(double advantage, double ratio, double clip_ratio, bool& clipped) {
  if (clip_ratio <= 0) {
    clipped = false;
    return advantage;
  }
  double lo = 1.0 - clip_ratio, hi = 1.0 + clip_ratio;
  if ((advantage >= 0 && ratio > hi) || (advantage < 0 && ratio < lo)) {
    clipped = true;  // gradient gated off
    return 0.0;
  }
  clipped = false;
  return advantage * ratio;
}

size_t total_candidates(const std::vector<RolloutGroup>& groups) {
  size_t n = 0;
  for (const auto& g : groups) n += g.candidates.size();
  return n;
}

}  // namespace

double surrogate_objective(const ToyPolicy& policy, const std::vector<RolloutGroup>& groups,
                           double kl_beta, double clip_ratio) {
  size_t n = total_candidates(groups);
  if (n == 0) throw ValidationError("surrogate_objective: no candidates");
  double sum = 0.0;
  for (const auto& group : groups) {
    for (size_t i = 0; i < group.candidates.size(); ++i) {
      double lp = policy.log_prob(group.candidates[i].choices);
      if (clip_ratio > 0) {
        double ratio = std::exp(lp - group.candidates[i].log_prob);
        double a = group.advantages[i];
        sum += std::min(ratio * a, std::clamp(ratio, 1.0 - clip_ratio, 1.0 + clip_ratio) * a);
      } else {
        sum += group.advantages[i] * lp;
      }
    }
  }
  return sum / static_cast<double>(n) - kl_beta * policy.kl_to_reference();
}

std::vector<std::vector<double>> surrogate_gradient(const ToyPolicy& policy,
                                                    const std::vector<RolloutGroup>& groups,
                                                    double kl_beta, double clip_ratio) {
  size_t n = total_candidates(groups);
  if (n == 0) throw ValidationError("surrogate_gradient: no candidates");

  std::vector<std::vector<double>> grad(policy.slot_count());
  std::vector<std::vector<double>> probs(policy.slot_count());
  for (size_t s = 0; s < policy.slot_count(); ++s) {
    grad[s].assign(policy.options_in(s), 0.0);
    probs[s] = policy.probs(s);
  }

  // Policy-gradient term: d log pi(a) / dz_k = [k == a] - p_k.
  const double inv_n = 1.0 / static_cast<double>(n);
  for (const auto& group : groups) {
    for (size_t i = 0; i < group.candidates.size(); ++i) {
      double weight = group.advantages[i];
      if (clip_ratio > 0) {
        double ratio = std::exp(policy.log_prob(group.candidates[i].choices) -
                                group.candidates[i].log_prob);
        bool clipped = false;
        weight = clipped_factor(group.advantages[i], ratio, clip_ratio, clipped);
        if (clipped) continue;
      }
      for (size_t s = 0; s < policy.slot_count(); ++s) {
        size_t a = group.candidates[i].choices[s];
        for (size_t k = 0; k < probs[s].size(); ++k) {
          grad[s][k] += inv_n * weight * ((k == a ? 1.0 : 0.0) - probs[s][k]);
        }
      }
    }
  }

  // KL term: dKL/dz_k = p_k * ((log p_k - log q_k) - KL).
  if (kl_beta != 0.0) {
    for (size_t s = 0; s < policy.slot_count(); ++s) {
      auto q = policy.reference_probs(s);
      double kl = kl_categorical(probs[s], q);
      for (size_t k = 0; k < probs[s].size(); ++k) {
        double g = probs[s][k] * ((std::log(probs[s][k]) - std::log(q[k])) - kl);
        grad[s][k] -= kl_beta * g;
      }
    }
  }
  return grad;
}

GrpoStepReport grpo_step(ToyPolicy& policy, const std::vector<RolloutGroup>& groups,
                         const GrpoOptions& options) {
  GrpoStepReport report;
  size_t n = total_candidates(groups);
  if (n == 0) throw ValidationError("grpo_step: no rollout groups");

  double reward_sum = 0.0, abs_adv_sum = 0.0;
  for (const auto& group : groups) {
    for (size_t i = 0; i < group.rewards.size(); ++i) {
      reward_sum += group.rewards[i];
      abs_adv_sum += std::abs(group.advantages[i]);
    }
  }
  report.mean_reward = reward_sum / static_cast<double>(n);
  report.mean_abs_advantage = abs_adv_sum / static_cast<double>(n);
  report.kl = policy.kl_to_reference();

  auto grad = surrogate_gradient(policy, groups, options.kl_beta, options.clip_ratio);
  for (const auto& slot_grad : grad) {
    for (double g : slot_grad) {
      if (!std::isfinite(g)) {
        report.aborted = true;
        report.abort_reason = "non-finite gradient";
        return report;
      }
    }
  }
  auto& logits = policy.mutable_logits();
  for (size_t s = 0; s < grad.size(); ++s) {
    for (size_t k = 0; k < grad[s].size(); ++k) {
      logits[s][k] += options.learning_rate * grad[s][k];
    }
  }
  return report;
}

TrainResult train_toy(const ToyTask& task, const ToyTrainConfig& config) {
  std::vector<size_t> sizes;
  for (const auto& slot : task.slots) sizes.push_back(slot.options.size());
  TrainResult result{.trace = {}, .policy = ToyPolicy(sizes), .diverged = false};

  TokenF1Scorer scorer;
  PatternSet patterns = PatternSet::resolve(task.rubric.pattern_set);

  for (size_t iter = 0; iter < config.iterations; ++iter) {
    uint64_t iter_seed = fnv1a64("iter:" + std::to_string(iter), config.seed);
    auto samples = sample_group(result.policy, task, config.group_size, iter_seed);

    std::vector<double> rewards(samples.size(), 0.0);
    parallel_for(ExecPolicy::Parallel, samples.size(), [&](size_t i) {
      rewards[i] = total_reward(samples[i].text, task.gold, task.rubric, scorer, patterns).total;
    });

    auto group = make_rollout_group(task.input_id, std::move(samples), std::move(rewards),
                                    config.epsilon);
    auto report = grpo_step(result.policy, {group}, config.grpo);

    double adv_var = 0.0;
    for (double a : group.advantages) adv_var += a * a;  // advantages have mean 0
    TrainIteration row;
    row.iteration = iter;
    row.mean_reward = report.mean_reward;
    row.kl = report.kl;
    row.std_advantage = std::sqrt(adv_var / static_cast<double>(group.advantages.size()));
    result.trace.push_back(row);

    if (!std::isfinite(report.mean_reward)) {
      result.diverged = true;
      return result;
    }
  }
  return result;
}

}  // namespace jf
