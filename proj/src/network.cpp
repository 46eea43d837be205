//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/network.h"

#include <algorithm>
#include <charconv>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rxnrl/canonical.h"
#include "rxnrl/smiles.h"

namespace rxnrl {

bool SpeciesFilter::accepts(const MolGraph &mol) const noexcept {
  const int q = mol.net_charge();
  return q >= min_charge && q <= max_charge && mol.size() <= max_heavy_atoms;
}

std::string SpeciesFilter::descriptor() const {
  return "charge=" + std::to_string(min_charge) + ".."
         + std::to_string(max_charge)
         + ",heavy<=" + std::to_string(max_heavy_atoms);
}

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  return v;
}

} // namespace

SpeciesFilter SpeciesFilter::parse(std::string_view d) {
  SpeciesFilter f;
  std::size_t pos = 0;
  while (pos < d.size()) {
    std::size_t end = d.find(',', pos);
    if (end == std::string_view::npos)
      end = d.size();
    const std::string_view item = d.substr(pos, end - pos);
    if (item.starts_with("charge=")) {
      const std::string_view range = item.substr(7);
      const std::size_t dots = range.find("..");
      if (dots == std::string_view::npos) {
        f.min_charge = f.max_charge = parse_int(range);
      } else {
        f.min_charge = parse_int(range.substr(0, dots));
        f.max_charge = parse_int(range.substr(dots + 2));
      }
    } else if (item.starts_with("heavy<=")) {
      f.max_heavy_atoms = parse_int(item.substr(7));
    } else {
      throw std::invalid_argument("unknown filter item '" + std::string(item)
                                  + "'");
    }
    pos = end + 1;
  }
  if (f.min_charge > f.max_charge || f.max_heavy_atoms < 1)
    throw std::invalid_argument("empty filter range");
  return f;
}

int ReactionNetwork::find(const CanonicalForm &form) const {
  auto it = index_.find(form);
  return it == index_.end() ? -1 : it->second;
}

int ReactionNetwork::find_smiles(std::string_view smiles) const {
  return find(canonicalize(parse_smiles(smiles)));
}

std::vector<int> ReactionNetwork::principal_initial() const {
  std::vector<int> out;
  for (int id: initial_ids) {
    if (!species[id].auxiliary)
      out.push_back(id);
  }
  if (out.empty() && !initial_ids.empty())
    out.push_back(initial_ids.front());
  return out;
}

void ReactionNetwork::reindex() {
  index_.clear();
  for (Species &s: species) {
    s.auxiliary = false;
    index_.emplace(s.canonical, s.id);
  }
  for (const Reaction &r: reactions) {
    for (int id: r.aux_consumed)
      species[id].auxiliary = true;
    for (int id: r.aux_produced)
      species[id].auxiliary = true;
  }
}

namespace {

class Expander {
public:
  Expander(const RuleSet &rules, const SpeciesFilter &filter,
           const ExpandLimits &limits)
      : rules_(rules), filter_(filter), limits_(limits) { }

  ReactionNetwork run(const std::vector<MolGraph> &initial) {
    if (initial.empty())
      throw NetworkError(NetworkError::Kind::kInvalidSpecies,
                         "no initial species");
    net_.catalog_hash = rules_.hash();
    net_.filter_descriptor = filter_.descriptor();

    for (const MolGraph &m: initial) {
      if (!m.is_connected())
        throw NetworkError(NetworkError::Kind::kInvalidSpecies,
                           "initial species must be single molecules");
      const int id = intern(canonicalize(m));
      net_.initial_ids.push_back(id);
    }

    for (std::size_t next = 0; next < net_.species.size(); ++next) {
      if (!expand_species(static_cast<int>(next))) {
        net_.termination = Termination::kSpeciesLimit;
        break;
      }
    }
    net_.reindex();
    return std::move(net_);
  }

private:
  int intern(const CanonicalForm &form) {
    auto it = ids_.find(form);
    if (it != ids_.end())
      return it->second;
    Species s;
    s.id = static_cast<int>(net_.species.size());
    s.canonical = form;
    s.graph = parse_smiles(form.text);
    s.formula = s.graph.formula();
    s.charge = s.graph.net_charge();
    net_.species.push_back(std::move(s));
    ids_.emplace(form, net_.species.back().id);
    return net_.species.back().id;
  }

  int count_new(const ApplyResult &r) const {
    std::set<CanonicalForm> fresh;
    for (const auto &f: r.product_forms)
      if (!ids_.contains(f))
        fresh.insert(f);
    for (const auto &f: r.aux_consumed)
      if (!ids_.contains(f))
        fresh.insert(f);
    for (const auto &f: r.aux_produced)
      if (!ids_.contains(f))
        fresh.insert(f);
    return static_cast<int>(fresh.size());
  }

  // False when the species limit stopped the expansion.
  bool expand_species(int sid) {
    const MolGraph graph = net_.species[sid].graph;
    for (SpeciesReaction &sr:
         react(graph, rules_, filter_, limits_.max_heavy_atoms)) {
      const ApplyResult &r = sr.result;
      if (static_cast<int>(net_.species.size()) + count_new(r)
          > limits_.max_species)
        return false;

      Reaction rx;
      rx.id = static_cast<int>(net_.reactions.size());
      rx.template_id = sr.tmpl->id;
      rx.site_key = std::move(sr.match.site_key);
      rx.reactants = { sid };
      for (const auto &f: r.aux_consumed)
        rx.aux_consumed.push_back(intern(f));
      for (const auto &f: r.product_forms)
        rx.products.push_back(intern(f));
      for (const auto &f: r.aux_produced)
        rx.aux_produced.push_back(intern(f));
      std::sort(rx.aux_consumed.begin(), rx.aux_consumed.end());
      std::sort(rx.products.begin(), rx.products.end());
      std::sort(rx.aux_produced.begin(), rx.aux_produced.end());
      net_.reactions.push_back(std::move(rx));
    }
    return true;
  }

  const RuleSet &rules_;
  const SpeciesFilter &filter_;
  const ExpandLimits &limits_;
  ReactionNetwork net_;
  std::map<CanonicalForm, int> ids_;
};

} // namespace

std::vector<SpeciesReaction> react(const MolGraph &mol, const RuleSet &rules,
                                   const SpeciesFilter &filter,
                                   int max_heavy_atoms) {
  std::vector<SpeciesReaction> out;
  for (const ReactionTemplate &t: rules.templates()) {
    for (Match &m: find_matches(t, mol)) {
      ApplyResult r = apply(t, mol, m);
      bool ok = true;
      for (const MolGraph &p: r.products) {
        if (!filter.accepts(p) || p.size() > max_heavy_atoms) {
          ok = false;
          break;
        }
      }
      if (ok)
        out.push_back({ &t, std::move(m), std::move(r) });
    }
  }
  return out;
}

ReactionNetwork expand(const std::vector<MolGraph> &initial,
                       const RuleSet &rules, const SpeciesFilter &filter,
                       const ExpandLimits &limits) {
  if (limits.max_species < 1 || limits.max_heavy_atoms < 1)
    throw std::invalid_argument("expansion limits must be positive");
  return Expander(rules, filter, limits).run(initial);
}

ReactionNetwork reverse(const ReactionNetwork &net) {
  ReactionNetwork out = net;
  for (Reaction &r: out.reactions) {
    std::swap(r.reactants, r.products);
    std::swap(r.aux_consumed, r.aux_produced);
  }
  if (net.goal_id >= 0) {
    const std::vector<int> principal = net.principal_initial();
    if (!principal.empty()) {
      const int start = principal.front();
      auto it = std::find(out.initial_ids.begin(), out.initial_ids.end(),
                          start);
      *it = net.goal_id;
      out.goal_id = start;
    }
  }
  out.reindex();
  return out;
}

} // namespace rxnrl
