//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks, one per criterion. Each run prints a single line
//   criterion <n>: PASS|FAIL <detail> (<seconds>s)
// and exits non-zero on failure.
//

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "../fixtures.h"
#include "rxnrl/checkpoint.h"
#include "rxnrl/oracle.h"
#include "rxnrl/random.h"
#include "rxnrl/train.h"

namespace fs = std::filesystem;

namespace rxnrl {
namespace {

using namespace rxnrl::testing;

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string &why) {
    if (pass)
      detail.clear();
    else
      detail += "; ";
    pass = false;
    detail += why;
  }
};

MolGraph shuffled(const MolGraph &m, Rng &rng) {
  std::vector<int> perm(m.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.below(i)]);
  return m.permuted(perm);
}

const ReactionTemplate &tmpl(const std::string &id) {
  for (const ReactionTemplate &t: default_catalog().templates())
    if (t.id == id)
      return t;
  throw std::logic_error("no template " + id);
}

// Parser and canonicalizer.
Verdict criterion1(const fs::path &) {
  Verdict v;
  const auto net = fructose_network();
  Rng rng(101);
  int bad = 0;
  for (int i = 0; i < 500; ++i) {
    const Species &s = net->species[rng.below(net->species.size())];
    const MolGraph m = shuffled(s.graph, rng);
    if (canonicalize(parse_smiles(write_smiles(m))) != s.canonical)
      ++bad;
  }
  if (bad)
    v.fail(std::to_string(bad) + "/500 round trips changed the molecule");

  const MolGraph f = parse_smiles(kFructose);
  std::set<std::string> forms;
  for (int i = 0; i < 1000; ++i)
    forms.insert(canonicalize(shuffled(f, rng)).text);
  if (forms.size() != 1)
    v.fail(std::to_string(forms.size())
           + " canonical forms over 1000 fructose permutations");
  if (v.pass)
    v.detail = "500 round trips, 1000 permutations -> 1 form";
  return v;
}

// Rule engine.
Verdict criterion2(const fs::path &) {
  Verdict v;
  const MolGraph f = parse_smiles(kFructose);
  std::set<std::string> offspring;
  for (const Match &m: find_matches(tmpl("a1"), f))
    for (const CanonicalForm &p: apply(tmpl("a1"), f, m).product_forms)
      offspring.insert(p.text);
  if (offspring.size() != 6)
    v.fail(std::to_string(offspring.size()) + " protonation offspring");

  const auto net = fructose_network();
  const auto &templates = default_catalog().templates();
  Rng rng(202);
  int applied = 0, unbalanced = 0;
  for (int attempt = 0; applied < 1000 && attempt < 200000; ++attempt) {
    const Species &s = net->species[rng.below(net->species.size())];
    const ReactionTemplate &t = templates[rng.below(templates.size())];
    const auto matches = find_matches(t, s.graph);
    if (matches.empty())
      continue;
    try {
      const ApplyResult r =
          apply(t, s.graph, matches[rng.below(matches.size())]);
      check_balance(s.graph, r);
      ++applied;
    } catch (const ApplyError &e) {
      if (e.kind() == ApplyError::Kind::kBalance)
        ++unbalanced;
    }
  }
  if (applied != 1000 || unbalanced)
    v.fail("fuzz: " + std::to_string(applied) + " applications, "
           + std::to_string(unbalanced) + " unbalanced");

  int pairs = 0, restored = 0;
  for (const Reaction &rx: net->reactions) {
    const ReactionTemplate &t = tmpl(rx.template_id);
    if (t.reverse_id.empty() || rx.products.size() != 1)
      continue;
    ++pairs;
    const ReactionTemplate &back = tmpl(t.reverse_id);
    const MolGraph &p = net->species[rx.products.front()].graph;
    for (const Match &m: find_matches(back, p)) {
      try {
        const ApplyResult r = apply(back, p, m);
        if (r.product_forms.size() == 1
            && r.product_forms.front()
                   == net->species[rx.reactants.front()].canonical) {
          ++restored;
          break;
        }
      } catch (const ApplyError &) {
      }
    }
  }
  if (restored != pairs)
    v.fail(std::to_string(pairs - restored) + "/" + std::to_string(pairs)
           + " reverse pairs did not restore");
  if (v.pass)
    v.detail = "6 offspring, 1000 balanced applications, "
               + std::to_string(pairs) + " reverse pairs restore";
  return v;
}

// Network fixpoint.
Verdict criterion3(const fs::path &out) {
  Verdict v;
  const ReactionNetwork net =
      expand(fructose_initial(), default_catalog(), SpeciesFilter {});
  if (net.termination != Termination::kFixpoint)
    v.fail("expansion stopped before the fixpoint");
  if (net.find_smiles(kHmf) < 0)
    v.fail("HMF missing");
  if (static_cast<int>(net.species.size()) != kFructoseSpecies
      || static_cast<int>(net.reactions.size()) != kFructoseReactions)
    v.fail("counts " + std::to_string(net.species.size()) + "/"
           + std::to_string(net.reactions.size()) + ", expected "
           + std::to_string(kFructoseSpecies) + "/"
           + std::to_string(kFructoseReactions));

  std::vector<MolGraph> all;
  for (const Species &s: net.species)
    all.push_back(s.graph);
  const ReactionNetwork again =
      expand(all, default_catalog(), SpeciesFilter {});
  bool same = again.species.size() == net.species.size()
              && again.reactions.size() == net.reactions.size();
  for (const Species &s: again.species)
    same = same && net.find(s.canonical) >= 0;
  if (!same)
    v.fail("re-expansion changed the network");

  fs::create_directories(out);
  const std::string a = (out / "fructose.net").string();
  const std::string b = (out / "fructose_copy.net").string();
  net.save(a);
  ReactionNetwork::load(a).save(b);
  auto slurp = [](const std::string &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (slurp(a) != slurp(b))
    v.fail("load(save(net)) is not byte-identical");
  fs::remove(b);
  if (v.pass)
    v.detail = std::to_string(net.species.size()) + " species, "
               + std::to_string(net.reactions.size())
               + " reactions, HMF present, idempotent, byte-stable";
  return v;
}

// Reward semantics.
Verdict criterion4(const fs::path &) {
  Verdict v;
  {
    const Env env = Env::dataset(chain_network(5));
    StepResult r = env.reset();
    if (r.reward != 0.0)
      v.fail("nonzero reset reward");
    for (int t = 1; t <= 5; ++t) {
      r = env.step(r.state, 0);
      if (t < 5 && r.reward != 0.0)
        v.fail("nonzero reward before the goal");
    }
    if (r.state.outcome != Outcome::kGoal || r.reward != 1.2)
      v.fail("goal at T=5 gave " + format_reward(r.reward));
  }
  {
    const Env env = Env::dataset(dead_end_network());
    StepResult r = env.reset();
    for (int t = 0; t < 3; ++t) {
      r = env.step(r.state, 0);
      if (t < 2 && r.reward != 0.0)
        v.fail("nonzero reward before the dead end");
    }
    if (r.state.outcome != Outcome::kDeadEnd || r.reward != -1.0)
      v.fail("dead end gave " + format_reward(r.reward));
  }
  {
    const Env env = Env::dataset(loop_network());
    StepResult r = env.reset();
    int steps = 0;
    while (!r.done) {
      r = env.step(r.state, 0);
      ++steps;
      if (!r.done && r.reward != 0.0)
        v.fail("nonzero reward before the timeout");
    }
    if (steps != 20 || r.state.outcome != Outcome::kTimeout
        || r.reward != -1.0)
      v.fail("timeout after " + std::to_string(steps) + " steps gave "
             + format_reward(r.reward));
  }
  if (v.pass)
    v.detail = "goal T=5 -> 1.2, dead end -> -1, timeout M=20 -> -1, "
               "0 elsewhere";
  return v;
}

// Compares BFS and exhaustive DFS on one instance and replays the paths.
// Returns false when the instance has no path.
bool cross_check(const Env &env, const Env *live, Verdict &v,
                 const std::string &name) {
  const StateGraph g = build_state_graph(env);
  const PathResult p = shortest_path(env, g);
  const ExhaustiveResult ex = exhaustive_check(g, env.config().max_steps, 50);
  if (p.exists != (ex.min_length >= 0)) {
    v.fail(name + ": BFS and DFS disagree on existence");
    return false;
  }
  if (!p.exists)
    return false;
  if (p.length != ex.min_length)
    v.fail(name + ": BFS " + std::to_string(p.length) + " vs DFS "
           + std::to_string(ex.min_length));
  for (const std::vector<int> &path: ex.paths) {
    const std::string err =
        replay(env, path, static_cast<int>(path.size()));
    if (!err.empty()) {
      v.fail(name + ": " + err);
      break;
    }
  }
  if (live) {
    const std::string err = replay(*live, p.actions, p.length);
    if (!err.empty())
      v.fail(name + ": live " + err);
    else if (const auto a = path_trace(*live, p.actions),
             b = path_trace(env, p.actions);
             a != b) {
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) {
          v.fail(name + ": live trace '" + a[i] + "' vs '" + b[i] + "'");
          break;
        }
    }
    const std::string rules =
        validate_with_rules(env, default_catalog(), p.actions);
    if (!rules.empty())
      v.fail(name + ": " + rules);
  }
  return true;
}

// Oracle cross-check.
Verdict criterion5(const fs::path &) {
  Verdict v;
  const auto net = fructose_network();
  Rng rng(505);
  int sub = 0;
  for (int attempt = 0; sub < 25 && attempt < 5000; ++attempt) {
    const Species &s = net->species[rng.below(net->species.size())];
    if (s.auxiliary)
      continue;
    EnvConfig cfg;
    cfg.start = { s.canonical.text };
    cfg.max_steps = 2 + static_cast<int>(rng.below(3));
    // Enumerate first, then pick a goal among reachable species.
    const Env probe = Env::dataset(net, cfg);
    StateGraph g;
    try {
      g = build_state_graph(probe, -1, 50);
    } catch (const OracleError &) {
      continue; // more than 50 states
    }
    if (g.size() < 3)
      continue;
    std::vector<int> candidates;
    for (int i = 0; i < g.size(); ++i)
      for (int id: g.states[i].species)
        if (g.depth[i] > 0 && id != net->goal_id
            && !net->species[id].auxiliary
            && !std::binary_search(g.states[g.start].species.begin(),
                                   g.states[g.start].species.end(), id))
          candidates.push_back(id);
    if (candidates.empty())
      continue;
    cfg.goal = net->species[candidates[rng.below(candidates.size())]]
                   .canonical.text;
    const Env env = Env::dataset(net, cfg);
    const Env live = Env::live(default_catalog(), SpeciesFilter {}, cfg);
    if (build_state_graph(env).size() > 50)
      continue;
    if (cross_check(env, &live, v, "sub-instance " + std::to_string(sub)))
      ++sub;
  }
  int synthetic = 0;
  for (int attempt = 0; synthetic < 25 && attempt < 1000; ++attempt) {
    const int n = 6 + static_cast<int>(rng.below(5));
    std::vector<Edge> edges;
    for (int from = 0; from < n; ++from)
      for (int k = static_cast<int>(rng.below(3)); k > 0; --k) {
        const int to = static_cast<int>(rng.below(n));
        if (to != from)
          edges.push_back({ from, { to } });
      }
    EnvConfig cfg;
    cfg.max_steps = 6;
    const Env env = Env::dataset(
        std::make_shared<const ReactionNetwork>(make_network(
            alcohols(n), edges, { 0 },
            1 + static_cast<int>(rng.below(n - 1)))),
        cfg);
    if (build_state_graph(env).size() > 50)
      continue;
    if (cross_check(env, nullptr, v,
                    "synthetic " + std::to_string(synthetic)))
      ++synthetic;
  }
  if (sub < 20)
    v.fail("only " + std::to_string(sub) + " fructose sub-instances");
  if (v.pass)
    v.detail = std::to_string(sub) + " fructose sub-instances and "
               + std::to_string(synthetic)
               + " synthetic networks: BFS == DFS, replays exact";
  return v;
}

// Gradient check.
Verdict criterion6(const fs::path &) {
  Verdict v;
  PolicyShape shape;
  shape.n_bits = 16;
  shape.d_in = 6;
  shape.hidden = 4;
  shape.d_score = 5;
  EnvConfig ecfg;
  ecfg.fingerprint_bits = 16;
  const Env env = Env::dataset(fructose_network(), ecfg);
  const PPOConfig cfg;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PolicyParams p = PolicyParams::random(shape, mix_seed(seed, 60));
    RolloutBatch b = collect_rollouts(p, env, 2, mix_seed(seed, 61));
    compute_gae(b, cfg.gamma, cfg.lambda);
    normalize_advantages(b);
    // Two-step episodes; old log-probabilities are moved so that some
    // ratios clip, but never within 1e-3 of a kink.
    Rng rng(mix_seed(seed, 62));
    for (Episode &e: b.episodes) {
      e.steps.resize(std::min<std::size_t>(e.steps.size(), 2));
      e.advantages.resize(e.steps.size());
      e.targets.resize(e.steps.size());
      for (StepRecord &s: e.steps) {
        const double logp = s.logp;
        double ratio;
        do {
          s.logp = logp + 0.6 * (rng.uniform() - 0.5);
          ratio = std::exp(logp - s.logp);
        } while (std::abs(ratio - (1 - cfg.clip)) < 1e-3
                 || std::abs(ratio - (1 + cfg.clip)) < 1e-3);
      }
    }
    std::vector<const Episode *> eps;
    for (const Episode &e: b.episodes)
      eps.push_back(&e);
    PolicyParams grad(shape);
    ppo_loss(p, eps, cfg, &grad);
    const double h = 1e-4;
    for (Eigen::Index i = 0; i < p.data().size(); ++i) {
      const double keep = p.data()[i];
      auto loss_at = [&](double x) {
        p.data()[i] = x;
        return ppo_loss(p, eps, cfg, nullptr).total;
      };
      const double fd = (-loss_at(keep + 2 * h) + 8 * loss_at(keep + h)
                         - 8 * loss_at(keep - h) + loss_at(keep - 2 * h))
                        / (12 * h);
      p.data()[i] = keep;
      const double g = grad.data()[i];
      worst = std::max(worst, std::abs(g - fd)
                                  / std::max(std::abs(g) + std::abs(fd),
                                             1e-6));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max relative error %.3g over 20 seeds",
                worst);
  v.detail = buf;
  if (!(worst < 1e-4))
    v.pass = false;
  return v;
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", s);
  return buf;
}

struct LearnRun {
  int seed = 0;
  bool ok = false;
  long first_optimal = -1; // trajectory at which best_len hit L*
  std::string why;
};

void write_lines(const fs::path &path, const std::vector<std::string> &lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const std::string &l: lines)
    out << l << '\n';
}

std::shared_ptr<const ReactionNetwork> network_for(bool reversed) {
  return reversed ? reversed_fructose_network() : fructose_network();
}

LearnRun learn(bool reversed, int seed, const fs::path &dir) {
  LearnRun run;
  run.seed = seed;
  const Env env = Env::dataset(network_for(reversed));
  const PathResult opt = shortest_path(env, build_state_graph(env));
  const int pinned = reversed ? kReverseShortest : kForwardShortest;
  if (!opt.exists || opt.length != pinned) {
    run.why = "oracle length " + std::to_string(opt.length);
    return run;
  }
  TrainConfig tc;
  tc.ppo.seed = static_cast<std::uint64_t>(seed);
  tc.target_length = opt.length;
  const TrainResult r = train(env, tc);

  fs::create_directories(dir);
  write_convergence_csv((dir / "convergence.csv").string(), r.log);
  save_checkpoint((dir / "policy.ckpt").string(), r.params);
  const GreedyResult g = greedy_rollout(r.params, env);
  write_lines(dir / "greedy_trace.txt", g.trace);

  for (std::size_t i = 0; i < r.log.size(); ++i) {
    if (i > 0 && r.log[i].best_len > r.log[i - 1].best_len) {
      run.why = "best_len increased at trajectory "
                + std::to_string(r.log[i].trajectory);
      return run;
    }
    if (run.first_optimal < 0 && r.log[i].best_len == opt.length)
      run.first_optimal = r.log[i].trajectory;
  }
  if (r.best_len != opt.length) {
    run.why = "best " + std::to_string(r.best_len) + " after "
              + std::to_string(r.trajectories) + " trajectories";
    return run;
  }
  run.ok = run.first_optimal <= tc.ppo.budget;
  return run;
}

Verdict learning(bool reversed, const fs::path &out) {
  Verdict v;
  const char *tag = reversed ? "rev" : "fwd";
  std::vector<std::string> parts;
  for (int seed = 1; seed <= 3; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const LearnRun run = learn(
        reversed, seed,
        out / (std::string(tag) + "_seed" + std::to_string(seed)));
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    std::string part = "seed " + std::to_string(seed) + ": ";
    if (run.ok)
      part += "L*=" + std::to_string(reversed ? kReverseShortest
                                              : kForwardShortest)
              + " at trajectory " + std::to_string(run.first_optimal);
    else
      part += run.why;
    part += " (" + fmt_seconds(secs) + "s)";
    parts.push_back(part);
    if (!run.ok)
      v.pass = false;
  }
  for (std::size_t i = 0; i < parts.size(); ++i)
    v.detail += (i ? "; " : "") + parts[i];
  return v;
}

Verdict criterion7(const fs::path &out) { return learning(false, out); }
Verdict criterion8(const fs::path &out) { return learning(true, out); }

// Greedy path of the trained forward policy.
Verdict criterion9(const fs::path &out) {
  Verdict v;
  const fs::path dir = out / "fwd_seed1";
  const Env env = Env::dataset(fructose_network());
  PolicyParams params;
  if (fs::exists(dir / "policy.ckpt")) {
    params = load_checkpoint((dir / "policy.ckpt").string());
  } else {
    learn(false, 1, dir);
    params = load_checkpoint((dir / "policy.ckpt").string());
  }
  const GreedyResult g = greedy_rollout(params, env);
  write_lines(dir / "greedy_trace.txt", g.trace);
  if (g.outcome != Outcome::kGoal || g.length != kForwardShortest) {
    v.fail(std::string("greedy rollout ended ") + outcome_name(g.outcome)
           + " after " + std::to_string(g.length) + " steps");
    return v;
  }
  const std::string rules =
      validate_with_rules(env, default_catalog(), g.actions);
  if (!rules.empty())
    v.fail(rules);
  const std::string rep = replay(env, g.actions, kForwardShortest);
  if (!rep.empty())
    v.fail(rep);
  if (path_trace(env, g.actions) != g.trace)
    v.fail("replayed trace differs");
  if (v.pass)
    v.detail = "greedy path of length " + std::to_string(g.length)
               + " re-validated step by step; trace in "
               + (dir / "greedy_trace.txt").string();
  return v;
}

} // namespace
} // namespace rxnrl

int main(int argc, char **argv) {
  CLI::App app { "rxnrl acceptance checks" };
  int criterion = 0;
  std::string out_dir = "acceptance";
  app.add_option("--criterion", criterion, "criterion number")
      ->required()
      ->check(CLI::Range(1, 9));
  app.add_option("--out-dir", out_dir, "where artifacts are written");
  CLI11_PARSE(app, argc, argv);

  using Fn = std::function<rxnrl::Verdict(const fs::path &)>;
  const Fn criteria[] = { rxnrl::criterion1, rxnrl::criterion2,
                          rxnrl::criterion3, rxnrl::criterion4,
                          rxnrl::criterion5, rxnrl::criterion6,
                          rxnrl::criterion7, rxnrl::criterion8,
                          rxnrl::criterion9 };
  // Seconds; 0 means no hard limit.
  const double limits[] = { 10, 30, 300, 0, 60, 60, 0, 0, 0 };

  const auto t0 = std::chrono::steady_clock::now();
  rxnrl::Verdict v;
  try {
    v = criteria[criterion - 1](fs::path(out_dir));
  } catch (const std::exception &e) {
    v.fail(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const double limit = limits[criterion - 1];
  if (limit > 0 && secs > limit)
    v.fail("took longer than " + rxnrl::fmt_seconds(limit) + "s");
  std::printf("criterion %d: %s %s (%ss)\n", criterion,
              v.pass ? "PASS" : "FAIL", v.detail.c_str(),
              rxnrl::fmt_seconds(secs).c_str());
  return v.pass ? 0 : 1;
}
