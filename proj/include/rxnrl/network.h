//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_NETWORK_H_
#define RXNRL_NETWORK_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rxnrl/canonical.h"
#include "rxnrl/molgraph.h"
#include "rxnrl/rules.h"

namespace rxnrl {

// Admits species by net charge and heavy-atom count.
struct SpeciesFilter {
  int min_charge = 0;
  int max_charge = 1;
  int max_heavy_atoms = 13;

  bool accepts(const MolGraph &mol) const noexcept;

  // "charge=0..1,heavy<=13"
  std::string descriptor() const;
  // Throws std::invalid_argument on malformed descriptors.
  static SpeciesFilter parse(std::string_view descriptor);

  friend bool operator==(const SpeciesFilter &,
                         const SpeciesFilter &) = default;
};

struct ExpandLimits {
  int max_species = 200000;
  int max_heavy_atoms = 64;
};

enum class Termination : std::uint8_t {
  kFixpoint,
  kSpeciesLimit,
};

struct Species {
  int id = 0;
  CanonicalForm canonical;
  MolGraph graph; // canonical atom order
  Formula formula;
  int charge = 0;
  // Appears on the auxiliary side of at least one reaction.
  bool auxiliary = false;
};

struct Reaction {
  int id = 0;
  std::string template_id;
  std::string site_key;
  std::vector<int> reactants;
  std::vector<int> aux_consumed;
  std::vector<int> products;
  std::vector<int> aux_produced;

  friend bool operator==(const Reaction &, const Reaction &) = default;
};

class NetworkError: public std::runtime_error {
public:
  enum class Kind {
    kIo,
    kFormat,
    kVersion,
    kChecksum,
    kInvalidSpecies,
  };

  NetworkError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) { }

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

class ReactionNetwork {
public:
  std::vector<Species> species;
  std::vector<Reaction> reactions;
  std::vector<int> initial_ids;
  int goal_id = -1;
  std::uint64_t catalog_hash = 0;
  std::string filter_descriptor;
  Termination termination = Termination::kFixpoint;
  // Set by load() when the file was produced with a different catalog.
  bool catalog_mismatch = false;

  // -1 when absent.
  int find(const CanonicalForm &form) const;
  int find_smiles(std::string_view smiles) const;

  // Non-auxiliary initial species; when every initial species is auxiliary,
  // the first one.
  std::vector<int> principal_initial() const;

  void set_goal(int id) { goal_id = id; }

  // Recomputes the auxiliary flags and the lookup index. Called after any
  // structural change.
  void reindex();

  std::string to_text() const;
  static ReactionNetwork from_text(std::string_view text);

  // load(save(net)) == net and save is byte-stable.
  void save(const std::string &path) const;
  static ReactionNetwork
  load(const std::string &path,
       std::optional<std::uint64_t> expected_catalog_hash = std::nullopt);

  // Compares serialized content.
  friend bool operator==(const ReactionNetwork &a, const ReactionNetwork &b) {
    return a.to_text() == b.to_text();
  }

private:
  std::map<CanonicalForm, int> index_;
};

struct SpeciesReaction {
  const ReactionTemplate *tmpl = nullptr;
  Match match;
  ApplyResult result;
};

// Reactions of one species whose principal products all pass the filter,
// in template then match order.
std::vector<SpeciesReaction> react(const MolGraph &mol, const RuleSet &rules,
                                   const SpeciesFilter &filter,
                                   int max_heavy_atoms = ExpandLimits {}
                                                             .max_heavy_atoms);

/**
 * Breadth-first expansion from the initial species. Every species is
 * expanded exactly once, in id order; each template match yields a reaction
 * whose principal products must pass the filter, otherwise the reaction is
 * dropped. Stops at the fixpoint or when max_species is reached (recorded in
 * termination).
 *
 * @throws NetworkError(kInvalidSpecies) for empty or disconnected initial
 *         species.
 */
ReactionNetwork expand(const std::vector<MolGraph> &initial,
                       const RuleSet &rules, const SpeciesFilter &filter,
                       const ExpandLimits &limits = {});

// Swaps reactant/product and auxiliary sides of every reaction and the
// principal start with the goal. An involution.
ReactionNetwork reverse(const ReactionNetwork &net);

struct NetworkStats {
  int species = 0;
  int reactions = 0;
  int states = 0;
  int dead_end_states = 0;
  int max_out_degree = 0;
  // out-degree -> number of states
  std::map<int, int> degree_histogram;
  bool truncated = false;
};

// Counts over the MDP state graph reachable from the principal initial
// species within max_steps.
NetworkStats stats(const ReactionNetwork &net, int max_steps = 20);

} // namespace rxnrl

#endif // RXNRL_NETWORK_H_
