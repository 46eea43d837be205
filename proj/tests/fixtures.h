//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//
// Hand-built networks and shared instances for the test suites.
//

#ifndef RXNRL_TESTS_FIXTURES_H_
#define RXNRL_TESTS_FIXTURES_H_

#include <memory>
#include <string>
#include <vector>

#include "rxnrl/canonical.h"
#include "rxnrl/env.h"
#include "rxnrl/network.h"
#include "rxnrl/smiles.h"

namespace rxnrl::testing {

inline constexpr const char *kFructose = "OCC(=O)C(O)C(O)C(O)CO";
inline constexpr const char *kHmf = "OCC1=CC=C(C=O)O1";
inline constexpr const char *kWater = "O";
inline constexpr const char *kHydronium = "[OH3+]";

// Pinned from the shipped catalog; see the acceptance suite.
inline constexpr int kFructoseSpecies = 3024;
inline constexpr int kFructoseReactions = 8915;
inline constexpr int kForwardShortest = 10;
inline constexpr int kReverseShortest = 10;

struct Edge {
  int from;
  std::vector<int> to;
  std::vector<int> consumed = {};
  std::vector<int> produced = {};
  std::string tmpl = "x1";
};

// Species are alkanes/alcohols chosen only to be distinct; reactions are
// synthetic and carry unique site keys.
inline ReactionNetwork make_network(const std::vector<std::string> &smiles,
                                    const std::vector<Edge> &edges,
                                    std::vector<int> initial, int goal) {
  ReactionNetwork net;
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    const MolGraph g = canonical_graph(parse_smiles(smiles[i]));
    Species s;
    s.id = static_cast<int>(i);
    s.canonical = canonicalize(g);
    s.graph = g;
    s.formula = g.formula();
    s.charge = g.net_charge();
    net.species.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    Reaction r;
    r.id = static_cast<int>(i);
    r.template_id = edges[i].tmpl;
    r.site_key = "s" + std::to_string(i);
    r.reactants = { edges[i].from };
    r.products = edges[i].to;
    r.aux_consumed = edges[i].consumed;
    r.aux_produced = edges[i].produced;
    net.reactions.push_back(std::move(r));
  }
  net.initial_ids = std::move(initial);
  net.goal_id = goal;
  net.filter_descriptor = SpeciesFilter {}.descriptor();
  net.reindex();
  return net;
}

// n distinct straight-chain alcohols: CO, CCO, CCCO, ...
inline std::vector<std::string> alcohols(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i)
    out.push_back(std::string(i, 'C') + "O");
  return out;
}

// 0 -> 1 -> ... -> n, goal n.
inline std::shared_ptr<const ReactionNetwork> chain_network(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    edges.push_back({ i, { i + 1 } });
  return std::make_shared<const ReactionNetwork>(
      make_network(alcohols(n + 1), edges, { 0 }, n));
}

// 0 <-> 1, goal 2 unreachable.
inline std::shared_ptr<const ReactionNetwork> loop_network() {
  return std::make_shared<const ReactionNetwork>(make_network(
      alcohols(3), { { 0, { 1 } }, { 1, { 0 } } }, { 0 }, 2));
}

// 0 -> 1 -> 2 -> 3 with 3 a dead end, plus 0 -> 4 (goal).
inline std::shared_ptr<const ReactionNetwork> dead_end_network() {
  return std::make_shared<const ReactionNetwork>(
      make_network(alcohols(5),
                   { { 0, { 1 } }, { 1, { 2 } }, { 2, { 3 } }, { 0, { 4 } } },
                   { 0 }, 4));
}

inline std::vector<MolGraph> fructose_initial() {
  return { parse_smiles(kFructose), parse_smiles(kWater),
           parse_smiles(kHydronium) };
}

// Expanded once per process.
inline std::shared_ptr<const ReactionNetwork> fructose_network() {
  static const auto net = [] {
    ReactionNetwork n =
        expand(fructose_initial(), default_catalog(), SpeciesFilter {});
    n.set_goal(n.find_smiles(kHmf));
    return std::make_shared<const ReactionNetwork>(std::move(n));
  }();
  return net;
}

inline std::shared_ptr<const ReactionNetwork> reversed_fructose_network() {
  static const auto net =
      std::make_shared<const ReactionNetwork>(reverse(*fructose_network()));
  return net;
}

} // namespace rxnrl::testing

#endif // RXNRL_TESTS_FIXTURES_H_
