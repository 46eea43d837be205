//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/train.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rxnrl/random.h"

namespace rxnrl {

TrainResult train(const Env &env, const TrainConfig &config,
                  const TrainCallback &on_batch) {
  config.ppo.validate();
  PolicyShape shape = config.shape;
  shape.n_bits = env.config().fingerprint_bits;
  const int horizon = env.config().max_steps;

  TrainResult r { PolicyParams::random(shape, mix_seed(config.ppo.seed, 0)),
                  {}, 0, 0, false, {} };
  r.best_len = horizon + 1;
  Adam adam(r.params.size(), config.ppo.learning_rate);
  Rng shuffle(mix_seed(config.ppo.seed, 1));

  for (std::uint64_t batch_no = 0; r.trajectories < config.ppo.budget;
       ++batch_no) {
    const int n = static_cast<int>(std::min<long>(
        config.ppo.episodes_per_batch, config.ppo.budget - r.trajectories));
    RolloutBatch batch = collect_rollouts(
        r.params, env, n, mix_seed(config.ppo.seed, 2 + batch_no));
    for (const Episode &ep: batch.episodes) {
      if (ep.outcome == Outcome::kGoal)
        r.best_len = std::min(r.best_len, ep.length);
      r.log.push_back({ ++r.trajectories, ep.outcome, ep.ret, ep.length,
                        r.best_len });
    }

    compute_gae(batch, config.ppo.gamma, config.ppo.lambda);
    normalize_advantages(batch);
    r.updates.push_back(
        ppo_update(r.params, adam, batch, config.ppo, shuffle));
    if (on_batch)
      on_batch(r.params, r.log);

    if (config.target_length > 0 && r.best_len <= config.target_length) {
      const GreedyResult g = greedy_rollout(r.params, env);
      if (g.outcome == Outcome::kGoal && g.length <= config.target_length) {
        r.reached_target = true;
        break;
      }
    }
  }
  return r;
}

GreedyResult greedy_rollout(const PolicyParams &params, const Env &env) {
  GreedyResult g;
  StepResult cur = env.reset();
  g.ret = cur.reward;
  RecurrentState rs = RecurrentState::zeros(params.shape().hidden);
  while (!cur.done) {
    std::vector<Fingerprint> after;
    for (int a = 0; a < static_cast<int>(cur.state.actions.size()); ++a)
      after.push_back(env.afterstate_bits(cur.state, a));
    const Observation obs = env.encode_observation(cur.state);
    PolicyOutput out =
        policy_step(params, rs, obs.bits, obs.step_frac, after);
    const int best = static_cast<int>(
        std::max_element(out.probs.begin(), out.probs.end())
        - out.probs.begin());
    rs = std::move(out.next);
    StepResult next = env.step(cur.state, best);
    g.trace.push_back(env.trace_line(cur.state, best, next));
    g.actions.push_back(best);
    g.ret += next.reward;
    cur = std::move(next);
  }
  g.outcome = cur.state.outcome;
  g.length = cur.state.t;
  return g;
}

std::string convergence_csv(const std::vector<LogRow> &rows) {
  std::string out = "trajectory,outcome,return,path_len,best_len\n";
  for (const LogRow &r: rows) {
    out += std::to_string(r.trajectory) + ',' + outcome_name(r.outcome) + ','
           + format_reward(r.ret) + ',' + std::to_string(r.path_len) + ','
           + std::to_string(r.best_len) + '\n';
  }
  return out;
}

void write_convergence_csv(const std::string &path,
                           const std::vector<LogRow> &rows) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << convergence_csv(rows);
    if (!out)
      throw std::runtime_error("cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

namespace {

Outcome parse_outcome(std::string_view s) {
  for (Outcome o: { Outcome::kRunning, Outcome::kGoal, Outcome::kDeadEnd,
                    Outcome::kTimeout })
    if (s == outcome_name(o))
      return o;
  throw std::runtime_error("unknown outcome '" + std::string(s) + "'");
}

template <class T>
T parse_number(std::string_view s, int line) {
  T v {};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::runtime_error("convergence csv line " + std::to_string(line)
                             + ": bad number '" + std::string(s) + "'");
  return v;
}

} // namespace

std::vector<LogRow> parse_convergence_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)
      || line != "trajectory,outcome,return,path_len,best_len")
    throw std::runtime_error("convergence csv: missing header");
  std::vector<LogRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != 5)
      throw std::runtime_error("convergence csv line "
                               + std::to_string(line_no)
                               + ": expected 5 fields");
    LogRow r;
    r.trajectory = parse_number<long>(f[0], line_no);
    r.outcome = parse_outcome(f[1]);
    r.ret = parse_number<double>(f[2], line_no);
    r.path_len = parse_number<int>(f[3], line_no);
    r.best_len = parse_number<int>(f[4], line_no);
    rows.push_back(r);
  }
  return rows;
}

std::vector<LogRow> read_convergence_csv(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_convergence_csv(ss.str());
}

} // namespace rxnrl
