//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_ORACLE_H_
#define RXNRL_ORACLE_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rxnrl/env.h"

namespace rxnrl {

class OracleError: public std::runtime_error {
public:
  enum class Kind {
    kNodeCap,
    kPathCap,
    kReplay,
  };

  OracleError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) { }

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

struct StateEdge {
  int action_index = 0;
  int reaction = 0;
  int target = 0;
};

/**
 * Env states reachable from reset, keyed by Env::state_key. Nodes carry the
 * BFS depth at which they were first seen; edges leave only nodes with
 * depth < depth_cap that are not goal states. Out-degrees are recorded for
 * every node, including those at the cap.
 */
struct StateGraph {
  std::vector<std::string> keys;
  // Snapshots with t = 0.
  std::vector<EnvState> states;
  std::vector<int> depth;
  std::vector<std::vector<StateEdge>> edges;
  std::vector<int> out_degree;
  std::vector<bool> goal;
  int start = 0;
  int depth_cap = 0;
  // Some node at the cap has a successor outside the graph.
  bool truncated = false;

  int size() const noexcept { return static_cast<int>(keys.size()); }
  int edge_count() const noexcept;
  int find(const std::string &key) const;

  std::unordered_map<std::string, int> index;
};

// depth_cap < 0 uses the env horizon M. forbid_revisit is ignored: the
// graph is over states, not histories.
StateGraph build_state_graph(const Env &env, int depth_cap = -1,
                             int node_cap = 1000000);

struct GraphStats {
  int states = 0;
  int dead_end_states = 0;
  int max_out_degree = 0;
  // Over non-goal states.
  std::map<int, int> degree_histogram;
};

GraphStats graph_stats(const StateGraph &graph);

struct PathResult {
  bool exists = false;
  int length = 0;
  std::vector<int> actions; // action indices, replayable from reset
  std::vector<int> nodes;   // start .. goal, length + 1 entries
};

/**
 * BFS shortest path from graph.start to any goal node. Among shortest paths
 * the lexicographically smallest action-index sequence is returned. The path
 * is replayed through the env; a mismatch throws OracleError(kReplay).
 */
PathResult shortest_path(const Env &env, const StateGraph &graph);

// Replays actions from reset. Returns an empty string on success,
// otherwise a description of the first disagreement.
std::string replay(const Env &env, const std::vector<int> &actions,
                   int expected_length);

// Re-derives every reaction on the path with rules.apply and checks the
// stored products. Empty string on success.
std::string validate_with_rules(const Env &env, const RuleSet &rules,
                                const std::vector<int> &actions);

// Trace lines for a path, one action per line.
std::vector<std::string> path_trace(const Env &env,
                                    const std::vector<int> &actions);

struct ExhaustiveResult {
  std::vector<std::vector<int>> paths; // goal-reaching, length <= max_len
  int min_length = -1;                 // -1 when no path exists
  GraphStats stats;
};

/**
 * Depth-limited DFS over all action sequences of length <= max_len from the
 * start; loops are followed. Throws OracleError(kNodeCap) when the graph has
 * more than node_cap nodes and kPathCap when more than max_paths paths
 * exist.
 */
ExhaustiveResult exhaustive_check(const StateGraph &graph, int max_len,
                                  int node_cap = 10000,
                                  std::size_t max_paths = 1000000);

} // namespace rxnrl

#endif // RXNRL_ORACLE_H_
