//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/oracle.h"

#include <algorithm>
#include <deque>
#include <limits>

#include "rxnrl/canonical.h"

namespace rxnrl {

int StateGraph::edge_count() const noexcept {
  int n = 0;
  for (const auto &e: edges)
    n += static_cast<int>(e.size());
  return n;
}

int StateGraph::find(const std::string &key) const {
  auto it = index.find(key);
  return it == index.end() ? -1 : it->second;
}

StateGraph build_state_graph(const Env &env, int depth_cap, int node_cap) {
  StateGraph g;
  g.depth_cap = depth_cap < 0 ? env.config().max_steps : depth_cap;

  auto add = [&](EnvState s, int depth) {
    std::string key = env.state_key(s);
    auto it = g.index.find(key);
    if (it != g.index.end())
      return it->second;
    if (g.size() >= node_cap)
      throw OracleError(OracleError::Kind::kNodeCap,
                        "state graph exceeds " + std::to_string(node_cap)
                            + " nodes");
    const int id = g.size();
    g.index.emplace(key, id);
    g.keys.push_back(std::move(key));
    g.goal.push_back(s.outcome == Outcome::kGoal);
    g.out_degree.push_back(static_cast<int>(s.actions.size()));
    g.states.push_back(std::move(s));
    g.depth.push_back(depth);
    g.edges.emplace_back();
    return id;
  };

  // States are rebuilt at t = 0 so the horizon never hides their actions.
  auto snapshot = [&](std::vector<int> species, std::vector<int> pool) {
    return env.make_state(std::move(species), std::move(pool), 0);
  };

  const EnvState start = env.reset().state;
  g.start = add(snapshot(start.species, start.pool), 0);

  for (int u = 0; u < g.size(); ++u) {
    if (g.goal[u])
      continue;
    const int nact = g.out_degree[u];
    for (int a = 0; a < nact; ++a) {
      auto [species, pool] = env.apply_action(g.states[u], a);
      if (g.depth[u] >= g.depth_cap) {
        EnvState probe;
        probe.species = std::move(species);
        probe.pool = std::move(pool);
        std::sort(probe.species.begin(), probe.species.end());
        std::sort(probe.pool.begin(), probe.pool.end());
        if (!g.index.contains(env.state_key(probe)))
          g.truncated = true;
        continue;
      }
      const int reaction = g.states[u].actions[a].reaction;
      const int v = add(snapshot(std::move(species), std::move(pool)),
                        g.depth[u] + 1);
      g.edges[u].push_back({ a, reaction, v });
    }
  }
  return g;
}

GraphStats graph_stats(const StateGraph &g) {
  GraphStats s;
  s.states = g.size();
  for (int u = 0; u < g.size(); ++u) {
    if (g.goal[u])
      continue;
    const int d = g.out_degree[u];
    if (d == 0)
      ++s.dead_end_states;
    s.max_out_degree = std::max(s.max_out_degree, d);
    ++s.degree_histogram[d];
  }
  return s;
}

PathResult shortest_path(const Env &env, const StateGraph &g) {
  constexpr int kInf = std::numeric_limits<int>::max();
  const int n = g.size();
  std::vector<std::vector<int>> preds(n);
  for (int u = 0; u < n; ++u)
    for (const StateEdge &e: g.edges[u])
      preds[e.target].push_back(u);

  // Distance to the nearest goal, by reverse BFS.
  std::vector<int> dist(n, kInf);
  std::deque<int> queue;
  for (int u = 0; u < n; ++u) {
    if (g.goal[u]) {
      dist[u] = 0;
      queue.push_back(u);
    }
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u: preds[v]) {
      if (dist[u] == kInf) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }

  PathResult r;
  if (n == 0 || dist[g.start] == kInf)
    return r;
  r.exists = true;
  r.length = dist[g.start];
  int u = g.start;
  r.nodes.push_back(u);
  while (!g.goal[u]) {
    const StateEdge *best = nullptr;
    for (const StateEdge &e: g.edges[u]) {
      if (dist[e.target] == dist[u] - 1
          && (!best || e.action_index < best->action_index))
        best = &e;
    }
    r.actions.push_back(best->action_index);
    u = best->target;
    r.nodes.push_back(u);
  }

  const std::string err = replay(env, r.actions, r.length);
  if (!err.empty())
    throw OracleError(OracleError::Kind::kReplay, err);
  return r;
}

std::string replay(const Env &env, const std::vector<int> &actions,
                   int expected_length) {
  StepResult cur = env.reset();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (cur.done)
      return "episode ended before step " + std::to_string(i + 1);
    if (actions[i] < 0
        || actions[i] >= static_cast<int>(cur.state.actions.size()))
      return "action " + std::to_string(actions[i]) + " illegal at step "
             + std::to_string(i + 1);
    cur = env.step(cur.state, actions[i]);
  }
  if (cur.state.outcome != Outcome::kGoal)
    return std::string("replay ended with outcome ")
           + outcome_name(cur.state.outcome);
  if (cur.state.t != expected_length)
    return "replay reached the goal in " + std::to_string(cur.state.t)
           + " steps, expected " + std::to_string(expected_length);
  return {};
}

namespace {

// Empty when applying tmpl to `from` at `site` yields exactly the species
// `to` plus `aux`.
std::string rederive(EnvBackend &b, const ReactionTemplate &t, int from,
                     const std::string &site, const std::vector<int> &to,
                     const std::vector<int> &aux) {
  const MolGraph &mol = b.species(from).graph;
  for (const Match &m: find_matches(t, mol)) {
    if (m.site_key != site)
      continue;
    ApplyResult res;
    try {
      res = apply(t, mol, m);
    } catch (const std::exception &e) {
      return e.what();
    }
    auto sorted = [&b](const std::vector<int> &ids) {
      std::vector<std::string> v;
      for (int id: ids)
        v.push_back(b.species(id).canonical.text);
      std::sort(v.begin(), v.end());
      return v;
    };
    auto texts = [](const std::vector<CanonicalForm> &fs) {
      std::vector<std::string> v;
      for (const CanonicalForm &f: fs)
        v.push_back(f.text);
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted(to) != texts(res.product_forms))
      return "products differ from the rule engine";
    if (sorted(aux) != texts(res.aux_produced))
      return "auxiliary products differ from the rule engine";
    return {};
  }
  return "site no longer matches";
}

} // namespace

std::string validate_with_rules(const Env &env, const RuleSet &rules,
                                const std::vector<int> &actions) {
  EnvBackend &b = env.backend();
  StepResult cur = env.reset();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (cur.done || actions[i] < 0
        || actions[i] >= static_cast<int>(cur.state.actions.size()))
      return "step " + std::to_string(i + 1) + " not replayable";
    const Reaction &r = b.reaction(cur.state.actions[actions[i]].reaction);
    const std::string where = "step " + std::to_string(i + 1) + " ("
                              + r.template_id + '@' + r.site_key + "): ";
    const ReactionTemplate *t = rules.find(r.template_id);
    if (!t)
      return where + "template not in catalog";
    std::string err = "expected one reactant";
    if (r.reactants.size() == 1)
      err = rederive(b, *t, r.reactants.front(), r.site_key, r.products,
                     r.aux_produced);
    // A reversed network keeps template and site: re-derive the step in
    // its original direction.
    if (!err.empty() && r.products.size() == 1
        && rederive(b, *t, r.products.front(), r.site_key, r.reactants,
                    r.aux_consumed)
               .empty())
      err.clear();
    if (!err.empty())
      return where + err;
    cur = env.step(cur.state, actions[i]);
  }
  return {};
}

std::vector<std::string> path_trace(const Env &env,
                                    const std::vector<int> &actions) {
  std::vector<std::string> lines;
  StepResult cur = env.reset();
  for (int a: actions) {
    StepResult next = env.step(cur.state, a);
    lines.push_back(env.trace_line(cur.state, a, next));
    cur = std::move(next);
  }
  return lines;
}

ExhaustiveResult exhaustive_check(const StateGraph &g, int max_len,
                                  int node_cap, std::size_t max_paths) {
  if (g.size() > node_cap)
    throw OracleError(OracleError::Kind::kNodeCap,
                      "exhaustive check limited to "
                          + std::to_string(node_cap) + " nodes");
  ExhaustiveResult r;
  r.stats = graph_stats(g);
  if (g.size() == 0)
    return r;

  std::vector<int> path;
  // Iterative DFS: (node, next edge index).
  std::vector<std::pair<int, std::size_t>> stack;
  auto visit = [&](int u) {
    if (g.goal[u]) {
      if (r.paths.size() >= max_paths)
        throw OracleError(OracleError::Kind::kPathCap,
                          "more than " + std::to_string(max_paths)
                              + " goal paths");
      r.paths.push_back(path);
      const int len = static_cast<int>(path.size());
      if (r.min_length < 0 || len < r.min_length)
        r.min_length = len;
      return false;
    }
    return static_cast<int>(path.size()) < max_len;
  };
  if (visit(g.start))
    stack.push_back({ g.start, 0 });
  while (!stack.empty()) {
    auto &[u, k] = stack.back();
    if (k >= g.edges[u].size()) {
      stack.pop_back();
      if (!path.empty())
        path.pop_back();
      continue;
    }
    const StateEdge &e = g.edges[u][k++];
    path.push_back(e.action_index);
    if (visit(e.target))
      stack.push_back({ e.target, 0 });
    else
      path.pop_back();
  }
  return r;
}

} // namespace rxnrl
