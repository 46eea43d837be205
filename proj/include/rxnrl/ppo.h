//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_PPO_H_
#define RXNRL_PPO_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rxnrl/env.h"
#include "rxnrl/policy.h"
#include "rxnrl/random.h"

namespace rxnrl {

struct PPOConfig {
  double clip = 0.2;
  double gamma = 0.99;
  double lambda = 0.95;
  double learning_rate = 3e-4;
  int epochs = 4;
  // Before the first goal every return is -1 discounted by the time it
  // arrives, and per-batch normalization scales that small spread up to
  // unit advantages. Few, large minibatches keep the policy from settling
  // into long loops before a goal has been sampled.
  int episodes_per_batch = 64;
  int minibatch_episodes = 64;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
  long budget = 50000; // trajectories
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when out of range.
  void validate() const;
};

class TrainError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct StepRecord {
  StepInput input;
  int action = 0;
  double logp = 0.0;
  double value = 0.0;
  double reward = 0.0;
  bool done = false;
  Eigen::VectorXd h; // recurrent output after this step
};

struct Episode {
  std::vector<StepRecord> steps;
  std::vector<int> actions;
  Outcome outcome = Outcome::kRunning;
  // Nonzero only when the episode ended at reset.
  double reset_reward = 0.0;
  double ret = 0.0;
  int length = 0;
  // Filled by compute_gae; advantages are normalized afterwards.
  std::vector<double> advantages;
  std::vector<double> targets;
};

struct RolloutBatch {
  std::vector<Episode> episodes;

  int step_count() const;
};

// Samples episodes with the stochastic policy; the recurrent state starts
// at zero in every episode. Reproducible from the seed.
RolloutBatch collect_rollouts(const PolicyParams &params, const Env &env,
                              int n_episodes, std::uint64_t seed);

// delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t,
// A_t = sum_l (gamma lambda)^l delta_{t+l}, target_t = A_t + V_t.
void compute_gae(RolloutBatch &batch, double gamma, double lambda);

// Mean 0, standard deviation 1 over all steps of the batch; the deviation
// is floored at 1e-8.
void normalize_advantages(RolloutBatch &batch);

struct LossBreakdown {
  double total = 0.0;
  double policy = 0.0;  // clipped surrogate, negated
  double value = 0.0;   // mean squared error
  double entropy = 0.0; // mean over steps
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  int steps = 0;
};

/**
 * PPO loss over whole episodes, averaged per step:
 *   -min(rho A, clip(rho, 1-eps, 1+eps) A) + c_v (V - target)^2 - c_e H
 * with rho = exp(logp_new - logp_old). Gradients by backpropagation through
 * time are accumulated into grad when it is non-null.
 */
LossBreakdown ppo_loss(const PolicyParams &params,
                       std::span<const Episode *const> episodes,
                       const PPOConfig &config, PolicyParams *grad);

class Adam {
public:
  Adam(std::size_t n, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);

  void step(Eigen::VectorXd &params, const Eigen::VectorXd &grad);

  long steps() const noexcept { return t_; }
  const Eigen::VectorXd &m() const noexcept { return m_; }
  const Eigen::VectorXd &v() const noexcept { return v_; }

private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  Eigen::VectorXd m_, v_;
};

struct UpdateDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double grad_norm = 0.0; // before clipping, last minibatch
};

// Runs config.epochs passes over shuffled episode minibatches. The batch
// must already carry normalized advantages. Throws TrainError on a
// non-finite loss, leaving params untouched for that minibatch.
UpdateDiagnostics ppo_update(PolicyParams &params, Adam &adam,
                             const RolloutBatch &batch,
                             const PPOConfig &config, Rng &rng);

} // namespace rxnrl

#endif // RXNRL_PPO_H_
