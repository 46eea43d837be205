//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <memory>

#include "rxnrl/env.h"
#include "rxnrl/network.h"
#include "rxnrl/oracle.h"

namespace rxnrl {

NetworkStats stats(const ReactionNetwork &net, int max_steps) {
  NetworkStats out;
  out.species = static_cast<int>(net.species.size());
  out.reactions = static_cast<int>(net.reactions.size());
  if (net.species.empty())
    return out;

  // Counted over the whole reachable state graph, so the goal is not a
  // terminal here.
  auto copy = std::make_shared<ReactionNetwork>(net);
  copy->goal_id = -1;
  EnvConfig config;
  config.max_steps = max_steps;
  const Env env = Env::dataset(copy, config);
  const StateGraph g = build_state_graph(env, max_steps);
  const GraphStats gs = graph_stats(g);
  out.states = gs.states;
  out.dead_end_states = gs.dead_end_states;
  out.max_out_degree = gs.max_out_degree;
  out.degree_histogram = gs.degree_histogram;
  out.truncated = g.truncated;
  return out;
}

} // namespace rxnrl
