//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/ppo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rxnrl {

void PPOConfig::validate() const {
  auto fail = [](const std::string &msg) {
    throw std::invalid_argument("ppo config: " + msg);
  };
  if (!(clip > 0.0 && clip < 1.0))
    fail("clip must be in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0))
    fail("gamma must be in (0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    fail("lambda must be in [0, 1]");
  if (!(learning_rate > 0.0))
    fail("learning rate must be positive");
  if (epochs < 1 || episodes_per_batch < 1 || minibatch_episodes < 1)
    fail("epochs and batch sizes must be positive");
  if (entropy_coef < 0.0 || value_coef < 0.0 || !(max_grad_norm > 0.0))
    fail("coefficients must be non-negative, grad norm positive");
  if (budget < 1)
    fail("budget must be positive");
}

int RolloutBatch::step_count() const {
  int n = 0;
  for (const Episode &e: episodes)
    n += static_cast<int>(e.steps.size());
  return n;
}

namespace {

StepInput make_input(const Env &env, const EnvState &s) {
  StepInput in;
  const Observation obs = env.encode_observation(s);
  in.bits = obs.bits.on_bits();
  in.step_frac = obs.step_frac;
  in.action_bits.reserve(s.actions.size());
  for (int a = 0; a < static_cast<int>(s.actions.size()); ++a)
    in.action_bits.push_back(env.afterstate_bits(s, a).on_bits());
  return in;
}

} // namespace

RolloutBatch collect_rollouts(const PolicyParams &params, const Env &env,
                              int n_episodes, std::uint64_t seed) {
  if (n_episodes < 1)
    throw std::invalid_argument("collect_rollouts needs n_episodes >= 1");
  if (params.shape().n_bits != env.config().fingerprint_bits)
    throw std::invalid_argument("policy and env fingerprint lengths differ");
  Rng rng(seed);
  RolloutBatch batch;
  batch.episodes.reserve(n_episodes);
  for (int n = 0; n < n_episodes; ++n) {
    Episode ep;
    StepResult cur = env.reset(seed);
    ep.reset_reward = cur.reward;
    ep.ret = cur.reward;
    RecurrentState rs = RecurrentState::zeros(params.shape().hidden);
    while (!cur.done) {
      StepCache cache;
      rs = forward_step(params, rs, make_input(env, cur.state), cache);
      StepRecord rec;
      rec.action = rng.categorical(
          std::span<const double>(cache.probs.data(), cache.probs.size()));
      rec.logp = std::log(cache.probs[rec.action]);
      rec.value = cache.value;
      rec.h = cache.h;
      cur = env.step(cur.state, rec.action);
      rec.reward = cur.reward;
      rec.done = cur.done;
      rec.input = std::move(cache.input);
      ep.actions.push_back(rec.action);
      ep.ret += rec.reward;
      ep.steps.push_back(std::move(rec));
    }
    ep.outcome = cur.state.outcome;
    ep.length = cur.state.t;
    batch.episodes.push_back(std::move(ep));
  }
  return batch;
}

void compute_gae(RolloutBatch &batch, double gamma, double lambda) {
  for (Episode &ep: batch.episodes) {
    const int n = static_cast<int>(ep.steps.size());
    ep.advantages.assign(n, 0.0);
    ep.targets.assign(n, 0.0);
    double next_adv = 0.0;
    for (int t = n - 1; t >= 0; --t) {
      const StepRecord &s = ep.steps[t];
      const double next_value =
          (s.done || t + 1 >= n) ? 0.0 : ep.steps[t + 1].value;
      const double delta = s.reward + gamma * next_value - s.value;
      const double carry = s.done ? 0.0 : next_adv;
      ep.advantages[t] = delta + gamma * lambda * carry;
      ep.targets[t] = ep.advantages[t] + s.value;
      next_adv = ep.advantages[t];
    }
  }
}

void normalize_advantages(RolloutBatch &batch) {
  double sum = 0.0, sq = 0.0;
  long n = 0;
  for (const Episode &ep: batch.episodes) {
    for (double a: ep.advantages) {
      sum += a;
      ++n;
    }
  }
  if (n == 0)
    return;
  const double mean = sum / n;
  for (const Episode &ep: batch.episodes)
    for (double a: ep.advantages)
      sq += (a - mean) * (a - mean);
  const double sd = std::max(std::sqrt(sq / n), 1e-8);
  for (Episode &ep: batch.episodes)
    for (double &a: ep.advantages)
      a = (a - mean) / sd;
}

LossBreakdown ppo_loss(const PolicyParams &params,
                       std::span<const Episode *const> episodes,
                       const PPOConfig &config, PolicyParams *grad) {
  LossBreakdown out;
  for (const Episode *ep: episodes)
    out.steps += static_cast<int>(ep->steps.size());
  if (out.steps == 0)
    return out;
  const double inv_n = 1.0 / out.steps;
  const double lo = 1.0 - config.clip, hi = 1.0 + config.clip;

  std::vector<StepCache> caches;
  std::vector<StepGrad> grads;
  int clipped = 0;
  for (const Episode *ep: episodes) {
    const int n = static_cast<int>(ep->steps.size());
    if (n == 0)
      continue;
    caches.assign(n, StepCache {});
    grads.assign(n, StepGrad {});
    RecurrentState rs = RecurrentState::zeros(params.shape().hidden);
    for (int t = 0; t < n; ++t) {
      const StepRecord &rec = ep->steps[t];
      rs = forward_step(params, rs, rec.input, caches[t]);
      const StepCache &c = caches[t];
      const Eigen::VectorXd &p = c.probs;
      const double logp = std::log(p[rec.action]);
      const double ratio = std::exp(logp - rec.logp);
      const double adv = ep->advantages[t];
      const double s1 = ratio * adv;
      const double s2 = std::clamp(ratio, lo, hi) * adv;
      out.policy -= std::min(s1, s2) * inv_n;
      if (ratio < lo || ratio > hi)
        ++clipped;
      out.approx_kl += (rec.logp - logp) * inv_n;

      double entropy = 0.0;
      for (Eigen::Index j = 0; j < p.size(); ++j)
        if (p[j] > 0.0)
          entropy -= p[j] * std::log(p[j]);
      out.entropy += entropy * inv_n;

      const double err = c.value - ep->targets[t];
      out.value += err * err * inv_n;

      if (grad) {
        StepGrad &g = grads[t];
        g.d_logits = Eigen::VectorXd::Zero(p.size());
        if (s1 <= s2) {
          // d(-rho A)/dlogit_j = -rho A (1[j=a] - p_j)
          g.d_logits = (ratio * adv * inv_n) * p;
          g.d_logits[rec.action] -= ratio * adv * inv_n;
        }
        for (Eigen::Index j = 0; j < p.size(); ++j) {
          if (p[j] > 0.0)
            g.d_logits[j] += config.entropy_coef * inv_n * p[j]
                             * (std::log(p[j]) + entropy);
        }
        g.d_value = 2.0 * config.value_coef * err * inv_n;
      }
    }
    if (grad)
      backward_episode(params, caches, grads, *grad);
  }
  out.clip_fraction = static_cast<double>(clipped) * inv_n;
  out.total = out.policy + config.value_coef * out.value
              - config.entropy_coef * out.entropy;
  return out;
}

Adam::Adam(std::size_t n, double learning_rate, double beta1, double beta2,
           double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps),
      m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)) { }

void Adam::step(Eigen::VectorXd &params, const Eigen::VectorXd &grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -=
      lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

UpdateDiagnostics ppo_update(PolicyParams &params, Adam &adam,
                             const RolloutBatch &batch,
                             const PPOConfig &config, Rng &rng) {
  std::vector<const Episode *> eps;
  for (const Episode &e: batch.episodes)
    if (!e.steps.empty())
      eps.push_back(&e);
  UpdateDiagnostics d;
  if (eps.empty())
    return d;

  int count = 0;
  PolicyParams grad(params.shape());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the platform-independent generator.
    for (std::size_t i = eps.size(); i > 1; --i)
      std::swap(eps[i - 1], eps[rng.below(i)]);
    for (std::size_t start = 0; start < eps.size();
         start += config.minibatch_episodes) {
      const std::size_t end =
          std::min(eps.size(), start + config.minibatch_episodes);
      grad.data().setZero();
      const LossBreakdown loss = ppo_loss(
          params,
          std::span<const Episode *const>(eps.data() + start, end - start),
          config, &grad);
      if (!std::isfinite(loss.total) || !grad.finite())
        throw TrainError("non-finite PPO loss (policy "
                         + std::to_string(loss.policy) + ", value "
                         + std::to_string(loss.value) + ", entropy "
                         + std::to_string(loss.entropy) + ")");
      const double norm = grad.data().norm();
      if (norm > config.max_grad_norm)
        grad.data() *= config.max_grad_norm / norm;
      adam.step(params.data(), grad.data());

      d.policy_loss += loss.policy;
      d.value_loss += loss.value;
      d.entropy += loss.entropy;
      d.clip_fraction += loss.clip_fraction;
      d.approx_kl += loss.approx_kl;
      d.grad_norm = norm;
      ++count;
    }
  }
  d.policy_loss /= count;
  d.value_loss /= count;
  d.entropy /= count;
  d.clip_fraction /= count;
  d.approx_kl /= count;
  if (!params.finite())
    throw TrainError("parameters became non-finite");
  return d;
}

} // namespace rxnrl
