//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_TRAIN_H_
#define RXNRL_TRAIN_H_

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rxnrl/env.h"
#include "rxnrl/policy.h"
#include "rxnrl/ppo.h"

namespace rxnrl {

// One convergence-log row per trajectory.
struct LogRow {
  long trajectory = 0; // 1-based
  Outcome outcome = Outcome::kRunning;
  double ret = 0.0;
  int path_len = 0; // steps taken
  // Running minimum of path_len over goal-reaching trajectories; M + 1
  // until the first success.
  int best_len = 0;

  friend bool operator==(const LogRow &, const LogRow &) = default;
};

struct TrainConfig {
  PPOConfig ppo;
  PolicyShape shape; // n_bits is taken from the env
  // When positive, stop once a sampled trajectory and the greedy rollout
  // both reach the goal in at most this many steps.
  int target_length = 0;
};

struct TrainResult {
  PolicyParams params;
  std::vector<LogRow> log;
  int best_len = 0;
  long trajectories = 0;
  bool reached_target = false;
  std::vector<UpdateDiagnostics> updates;
};

// Called after every batch with the trajectories done so far.
using TrainCallback =
    std::function<void(const PolicyParams &, const std::vector<LogRow> &)>;

TrainResult train(const Env &env, const TrainConfig &config,
                  const TrainCallback &on_batch = {});

struct GreedyResult {
  Outcome outcome = Outcome::kRunning;
  int length = 0;
  double ret = 0.0;
  std::vector<int> actions;
  std::vector<std::string> trace;
};

// Argmax action at every step, ties to the lowest index.
GreedyResult greedy_rollout(const PolicyParams &params, const Env &env);

// "trajectory,outcome,return,path_len,best_len" followed by one line per
// row.
std::string convergence_csv(const std::vector<LogRow> &rows);
void write_convergence_csv(const std::string &path,
                           const std::vector<LogRow> &rows);
// Throws std::runtime_error on I/O or format errors.
std::vector<LogRow> read_convergence_csv(const std::string &path);
std::vector<LogRow> parse_convergence_csv(const std::string &text);

struct TabularConfig {
  long episodes = 1000;
  double alpha = 0.1;
  double gamma = 0.99;
  // Linear decay from eps_start to eps_end over decay_episodes.
  double eps_start = 1.0;
  double eps_end = 0.05;
  long decay_episodes = 500;
  int max_states = 200000;
  std::uint64_t seed = 0;
};

struct TabularResult {
  std::vector<LogRow> log;
  // State key -> action values in legal-action order.
  std::unordered_map<std::string, std::vector<double>> q;
  int best_len = 0;
};

// Q-learning over state keys. Throws TrainError when more than max_states
// distinct states are visited.
TabularResult tabular_q_learning(const Env &env, const TabularConfig &config);

} // namespace rxnrl

#endif // RXNRL_TRAIN_H_
