//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_RULES_H_
#define RXNRL_RULES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rxnrl/canonical.h"
#include "rxnrl/molgraph.h"

namespace rxnrl {

enum class RingPredicate : std::uint8_t {
  kAny,
  kRing,
  kChain,
};

struct AtomConstraint {
  std::optional<Element> element; // nullopt matches C and O
  std::optional<int> charge;
  int h_min = 0;
  int h_max = 8;
  RingPredicate ring = RingPredicate::kAny;
  // true: no double bond on the atom; false: at least one.
  std::optional<bool> saturated;

  bool matches(const MolGraph &mol, int atom) const;
};

struct BondConstraint {
  int src;
  int dst;
  BondOrder order;
  RingPredicate ring = RingPredicate::kAny;
};

// Connected pattern of at most kMaxPatternAtoms atoms. Matching is
// monomorphism: pattern bonds must exist with the stated order, extra bonds
// between matched atoms are allowed.
struct Pattern {
  static constexpr int kMaxPatternAtoms = 8;

  std::vector<AtomConstraint> atoms;
  std::vector<BondConstraint> bonds;

  int size() const noexcept { return static_cast<int>(atoms.size()); }
  // Throws std::invalid_argument when the pattern is not usable.
  void validate() const;
};

namespace edit {

// order 0 removes the bond.
struct SetBond {
  int src;
  int dst;
  int order;
};

struct SetCharge {
  int atom;
  int value;
};

struct AddHydrogens {
  int atom;
  int delta;
};

// Attaches a new atom (a fragment donated by an auxiliary species) to a
// pattern atom.
struct Attach {
  int atom;
  BondOrder order;
  Atom added;
};

} // namespace edit

using Edit = std::variant<edit::SetBond, edit::SetCharge, edit::AddHydrogens,
                          edit::Attach>;

struct ReactionTemplate {
  std::string id;
  std::string name;
  Pattern pattern;
  std::vector<Edit> edits;
  // Auxiliary species, by canonical SMILES.
  std::vector<CanonicalForm> consumes;
  std::vector<CanonicalForm> produces;
  // Components split off by the edits that leave as auxiliary species.
  std::vector<CanonicalForm> detaches;
  std::string reverse_id;
  bool approximate = false;
  std::string note;
};

struct Match {
  std::string template_id;
  std::vector<int> mapping; // pattern atom -> molecule atom
  std::string site_key;
};

struct ApplyResult {
  // Canonical graphs of the principal products, sorted by canonical form.
  std::vector<MolGraph> products;
  std::vector<CanonicalForm> product_forms;
  std::vector<CanonicalForm> aux_consumed;
  std::vector<CanonicalForm> aux_produced;
};

class ApplyError: public std::runtime_error {
public:
  enum class Kind {
    kValence,
    kStaleMatch,
    kBalance,
    kDetach,
  };

  ApplyError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) { }

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

// All constraint-satisfying injective mappings, one representative per
// site_key, sorted by site_key.
std::vector<Match> find_matches(const ReactionTemplate &tmpl,
                                const MolGraph &mol);

// Every raw mapping in backtracking order, before site deduplication.
std::vector<std::vector<int>> find_mappings(const Pattern &pattern,
                                            const MolGraph &mol);

std::string site_key(const MolGraph &mol, std::span<const int> mapping);

ApplyResult apply(const ReactionTemplate &tmpl, const MolGraph &reactant,
                  const Match &match);

// Throws ApplyError(kBalance) unless element, hydrogen and charge totals of
// reactants + consumed equal those of products + produced.
void check_balance(const MolGraph &reactant, const ApplyResult &result);

class RuleSet {
public:
  RuleSet() = default;
  explicit RuleSet(std::vector<ReactionTemplate> templates);

  const std::vector<ReactionTemplate> &templates() const noexcept {
    return templates_;
  }
  const ReactionTemplate *find(std::string_view id) const;
  bool empty() const noexcept { return templates_.empty(); }

  // Canonical forms of every species the templates consume, produce or
  // detach (water and hydronium for the shipped catalog).
  const std::vector<CanonicalForm> &auxiliary() const noexcept {
    return auxiliary_;
  }
  bool is_auxiliary(const CanonicalForm &form) const;

  // Keeps only the templates whose id starts with one of the prefixes
  // (rule letters).
  RuleSet subset(std::span<const std::string> prefixes) const;

  // FNV-1a over the normalized catalog text.
  std::uint64_t hash() const;

private:
  std::vector<ReactionTemplate> templates_;
  std::vector<CanonicalForm> auxiliary_;
};

class CatalogError: public std::runtime_error {
public:
  CatalogError(int line, const std::string &what)
      : std::runtime_error("catalog line " + std::to_string(line) + ": "
                           + what),
        line_(line) { }

  int line() const noexcept { return line_; }

private:
  int line_;
};

RuleSet parse_catalog(std::string_view text);
RuleSet load_catalog(const std::string &path);
// Normalized text; parse_catalog(catalog_to_text(r)) reproduces r.
std::string catalog_to_text(const RuleSet &rules);

// The carbohydrate catalog shipped in data/carbohydrate.rules, compiled in.
const RuleSet &default_catalog();

struct ReactionInstance {
  std::string template_id;
  std::string site_key;
  // Indices into the species span passed to enumerate_reactions.
  std::vector<int> reactants;
  ApplyResult result;
};

// All reactions available from the given species, deterministic and free of
// duplicates, ordered by (template id, site key, reactant canonical forms).
// Duplicate species in the input contribute once.
std::vector<ReactionInstance>
enumerate_reactions(const RuleSet &rules, std::span<const MolGraph> species);

} // namespace rxnrl

#endif // RXNRL_RULES_H_
