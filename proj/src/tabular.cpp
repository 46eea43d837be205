//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>

#include "rxnrl/random.h"
#include "rxnrl/train.h"

namespace rxnrl {

namespace {

int argmax_lowest(const std::vector<double> &q) {
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

} // namespace

TabularResult tabular_q_learning(const Env &env, const TabularConfig &config) {
  if (config.episodes < 1 || !(config.alpha > 0.0 && config.alpha <= 1.0)
      || !(config.gamma > 0.0 && config.gamma <= 1.0) || config.max_states < 1)
    throw std::invalid_argument("tabular config out of range");
  TabularResult r;
  r.best_len = env.config().max_steps + 1;
  Rng rng(config.seed);

  auto values = [&](const EnvState &s) -> std::vector<double> & {
    auto [it, added] = r.q.try_emplace(env.state_key(s));
    if (added) {
      if (static_cast<int>(r.q.size()) > config.max_states)
        throw TrainError("tabular state cap exceeded");
      it->second.assign(s.actions.size(), 0.0);
    }
    return it->second;
  };

  for (long ep = 0; ep < config.episodes; ++ep) {
    const double frac =
        config.decay_episodes > 0
            ? std::min(1.0, static_cast<double>(ep) / config.decay_episodes)
            : 1.0;
    const double eps =
        config.eps_start + (config.eps_end - config.eps_start) * frac;
    StepResult cur = env.reset();
    double ret = cur.reward;
    while (!cur.done) {
      std::vector<double> &q = values(cur.state);
      const int n = static_cast<int>(q.size());
      const int a = rng.uniform() < eps ? static_cast<int>(rng.below(n))
                                        : argmax_lowest(q);
      StepResult next = env.step(cur.state, a);
      double target = next.reward;
      if (!next.done) {
        const std::vector<double> &qn = values(next.state);
        target += config.gamma * *std::max_element(qn.begin(), qn.end());
      }
      q[a] += config.alpha * (target - q[a]);
      ret += next.reward;
      cur = std::move(next);
    }
    if (cur.state.outcome == Outcome::kGoal)
      r.best_len = std::min(r.best_len, cur.state.t);
    r.log.push_back({ ep + 1, cur.state.outcome, ret, cur.state.t,
                      r.best_len });
  }
  return r;
}

} // namespace rxnrl
