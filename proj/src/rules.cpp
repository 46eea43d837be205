//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/rules.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rxnrl/canonical.h"
#include "rxnrl/smiles.h"

namespace rxnrl {

bool AtomConstraint::matches(const MolGraph &mol, int i) const {
  const Atom &a = mol.atom(i);
  if (element && a.element != *element)
    return false;
  if (charge && a.formal_charge != *charge)
    return false;
  if (a.implicit_h < h_min || a.implicit_h > h_max)
    return false;
  if (saturated) {
    bool has_double = false;
    for (const Neighbor &n: mol.neighbors(i))
      has_double |= n.order == BondOrder::kDouble;
    if (has_double == *saturated)
      return false;
  }
  switch (ring) {
  case RingPredicate::kAny:
    return true;
  case RingPredicate::kRing:
    return mol.atom_in_ring(i);
  case RingPredicate::kChain:
    return !mol.atom_in_ring(i);
  }
  return true;
}

namespace {

bool bond_matches(const BondConstraint &bc, const MolGraph &mol, int a, int b) {
  if (mol.bond_order(a, b) != static_cast<int>(bc.order))
    return false;
  switch (bc.ring) {
  case RingPredicate::kAny:
    return true;
  case RingPredicate::kRing:
    return mol.bond_in_ring(a, b);
  case RingPredicate::kChain:
    return !mol.bond_in_ring(a, b);
  }
  return true;
}

} // namespace

void Pattern::validate() const {
  const int n = size();
  if (n == 0 || n > kMaxPatternAtoms)
    throw std::invalid_argument("pattern must have 1.."
                                + std::to_string(kMaxPatternAtoms) + " atoms");
  std::vector<std::vector<int>> adj(n);
  std::set<std::pair<int, int>> seen;
  for (const BondConstraint &b: bonds) {
    if (b.src < 0 || b.dst < 0 || b.src >= n || b.dst >= n || b.src == b.dst)
      throw std::invalid_argument("pattern bond references invalid atom");
    if (!seen.insert(std::minmax(b.src, b.dst)).second)
      throw std::invalid_argument("duplicate pattern bond");
    adj[b.src].push_back(b.dst);
    adj[b.dst].push_back(b.src);
  }
  std::vector<char> vis(n, 0);
  std::vector<int> stack { 0 };
  vis[0] = 1;
  int count = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    ++count;
    for (int v: adj[u]) {
      if (!vis[v]) {
        vis[v] = 1;
        stack.push_back(v);
      }
    }
  }
  if (count != n)
    throw std::invalid_argument("pattern is not connected");
}

namespace {

// Backtracking subgraph monomorphism in the style of VF2: pattern atoms are
// visited in BFS order so every atom after the first has an already mapped
// parent whose molecule neighbors are the only candidates.
class Matcher {
public:
  Matcher(const Pattern &p, const MolGraph &mol): p_(p), mol_(mol) {
    const int n = p.size();
    adj_.resize(n);
    for (int k = 0; k < static_cast<int>(p.bonds.size()); ++k) {
      adj_[p.bonds[k].src].push_back(k);
      adj_[p.bonds[k].dst].push_back(k);
    }
    std::vector<char> vis(n, 0);
    order_.push_back(0);
    parent_.push_back(-1);
    vis[0] = 1;
    for (std::size_t h = 0; h < order_.size(); ++h) {
      const int u = order_[h];
      for (int k: adj_[u]) {
        const int v = p.bonds[k].src == u ? p.bonds[k].dst : p.bonds[k].src;
        if (!vis[v]) {
          vis[v] = 1;
          order_.push_back(v);
          parent_.push_back(u);
        }
      }
    }
    map_.assign(n, -1);
    used_.assign(mol.size(), 0);
  }

  std::vector<std::vector<int>> run() {
    if (p_.size() > mol_.size())
      return {};
    extend(0);
    return std::move(out_);
  }

private:
  bool feasible(int pu, int mu) const {
    if (used_[mu] || !p_.atoms[pu].matches(mol_, mu))
      return false;
    for (int k: adj_[pu]) {
      const BondConstraint &bc = p_.bonds[k];
      const int pv = bc.src == pu ? bc.dst : bc.src;
      if (map_[pv] < 0)
        continue;
      if (!bond_matches(bc, mol_, mu, map_[pv]))
        return false;
    }
    return true;
  }

  void extend(std::size_t depth) {
    if (depth == order_.size()) {
      out_.push_back(map_);
      return;
    }
    const int pu = order_[depth];
    auto try_atom = [&](int mu) {
      if (!feasible(pu, mu))
        return;
      map_[pu] = mu;
      used_[mu] = 1;
      extend(depth + 1);
      used_[mu] = 0;
      map_[pu] = -1;
    };
    if (parent_[depth] < 0) {
      for (int mu = 0; mu < mol_.size(); ++mu)
        try_atom(mu);
    } else {
      for (const Neighbor &nb: mol_.neighbors(map_[parent_[depth]]))
        try_atom(nb.atom);
    }
  }

  const Pattern &p_;
  const MolGraph &mol_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> order_;
  std::vector<int> parent_;
  std::vector<int> map_;
  std::vector<char> used_;
  std::vector<std::vector<int>> out_;
};

bool mapping_valid(const Pattern &p, const MolGraph &mol,
                   std::span<const int> mapping) {
  if (static_cast<int>(mapping.size()) != p.size())
    return false;
  std::set<int> seen;
  for (int i = 0; i < p.size(); ++i) {
    const int m = mapping[i];
    if (m < 0 || m >= mol.size() || !seen.insert(m).second)
      return false;
    if (!p.atoms[i].matches(mol, m))
      return false;
  }
  for (const BondConstraint &bc: p.bonds) {
    if (!bond_matches(bc, mol, mapping[bc.src], mapping[bc.dst]))
      return false;
  }
  return true;
}

} // namespace

std::vector<std::vector<int>> find_mappings(const Pattern &pattern,
                                            const MolGraph &mol) {
  return Matcher(pattern, mol).run();
}

std::string site_key(const MolGraph &mol, std::span<const int> mapping) {
  std::vector<int> labels(mol.size(), 0);
  for (int i = 0; i < static_cast<int>(mapping.size()); ++i)
    labels[mapping[i]] = i + 1;
  return canonical_labeled_smiles(mol, labels);
}

std::vector<Match> find_matches(const ReactionTemplate &tmpl,
                                const MolGraph &mol) {
  std::map<std::string, std::vector<int>> by_site;
  for (auto &m: find_mappings(tmpl.pattern, mol)) {
    std::string key = site_key(mol, m);
    by_site.try_emplace(std::move(key), std::move(m));
  }
  std::vector<Match> out;
  out.reserve(by_site.size());
  for (auto &[key, mapping]: by_site)
    out.push_back({ tmpl.id, std::move(mapping), key });
  return out;
}

namespace {

Formula formula_of(const CanonicalForm &f) {
  return parse_smiles(f.text).formula();
}

int charge_of(const CanonicalForm &f) {
  return parse_smiles(f.text).net_charge();
}

} // namespace

void check_balance(const MolGraph &reactant, const ApplyResult &r) {
  Formula lhs = reactant.formula();
  int lhs_q = reactant.net_charge();
  for (const auto &f: r.aux_consumed) {
    lhs += formula_of(f);
    lhs_q += charge_of(f);
  }
  Formula rhs;
  int rhs_q = 0;
  for (const MolGraph &p: r.products) {
    rhs += p.formula();
    rhs_q += p.net_charge();
  }
  for (const auto &f: r.aux_produced) {
    rhs += formula_of(f);
    rhs_q += charge_of(f);
  }
  if (!(lhs == rhs) || lhs_q != rhs_q)
    throw ApplyError(ApplyError::Kind::kBalance,
                     "mass or charge balance violated");
}

ApplyResult apply(const ReactionTemplate &tmpl, const MolGraph &reactant,
                  const Match &match) {
  if (match.template_id != tmpl.id
      || !mapping_valid(tmpl.pattern, reactant, match.mapping))
    throw ApplyError(ApplyError::Kind::kStaleMatch,
                     "match does not fit template " + tmpl.id);

  std::vector<Atom> atoms = reactant.atoms();
  std::map<std::pair<int, int>, int> bonds;
  for (const Bond &b: reactant.bonds())
    bonds[{ b.src, b.dst }] = static_cast<int>(b.order);

  const auto &map = match.mapping;
  for (const Edit &e: tmpl.edits) {
    std::visit(
        [&](const auto &op) {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, edit::SetBond>) {
            const auto key = std::minmax(map[op.src], map[op.dst]);
            if (op.order == 0)
              bonds.erase(key);
            else
              bonds[key] = op.order;
          } else if constexpr (std::is_same_v<T, edit::SetCharge>) {
            atoms[map[op.atom]].formal_charge = op.value;
          } else if constexpr (std::is_same_v<T, edit::AddHydrogens>) {
            atoms[map[op.atom]].implicit_h += op.delta;
          } else if constexpr (std::is_same_v<T, edit::Attach>) {
            const int idx = static_cast<int>(atoms.size());
            atoms.push_back(op.added);
            bonds[{ map[op.atom], idx }] = static_cast<int>(op.order);
          }
        },
        e);
  }

  std::vector<Bond> bond_list;
  bond_list.reserve(bonds.size());
  for (const auto &[key, order]: bonds) {
    if (order < 1 || order > 2)
      throw ApplyError(ApplyError::Kind::kValence,
                       "unsupported bond order from template " + tmpl.id);
    bond_list.push_back({ key.first, key.second,
                          order == 2 ? BondOrder::kDouble
                                     : BondOrder::kSingle });
  }

  MolGraph edited;
  try {
    edited = MolGraph(std::move(atoms), std::move(bond_list));
  } catch (const MolError &e) {
    throw ApplyError(ApplyError::Kind::kValence,
                     "template " + tmpl.id + ": " + e.what());
  }

  ApplyResult result;
  std::vector<std::pair<CanonicalForm, MolGraph>> parts;
  for (const auto &comp: edited.components()) {
    // write_smiles of a canonically ordered graph is its canonical form.
    MolGraph g = canonical_graph(edited.subgraph(comp));
    parts.emplace_back(CanonicalForm { write_smiles(g) }, std::move(g));
  }
  for (const CanonicalForm &d: tmpl.detaches) {
    auto it = std::find_if(parts.begin(), parts.end(),
                           [&](const auto &p) { return p.first == d; });
    if (it == parts.end())
      throw ApplyError(ApplyError::Kind::kDetach,
                       "template " + tmpl.id + " expected to detach "
                           + d.text);
    result.aux_produced.push_back(it->first);
    parts.erase(it);
  }
  std::sort(parts.begin(), parts.end(),
            [](const auto &x, const auto &y) { return x.first < y.first; });
  for (auto &[form, g]: parts) {
    result.product_forms.push_back(form);
    result.products.push_back(std::move(g));
  }
  result.aux_consumed = tmpl.consumes;
  for (const CanonicalForm &p: tmpl.produces)
    result.aux_produced.push_back(p);
  std::sort(result.aux_consumed.begin(), result.aux_consumed.end());
  std::sort(result.aux_produced.begin(), result.aux_produced.end());

  check_balance(reactant, result);
  return result;
}

RuleSet::RuleSet(std::vector<ReactionTemplate> templates)
    : templates_(std::move(templates)) {
  std::sort(templates_.begin(), templates_.end(),
            [](const auto &a, const auto &b) { return a.id < b.id; });
  std::set<CanonicalForm> aux;
  for (std::size_t i = 0; i < templates_.size(); ++i) {
    const ReactionTemplate &t = templates_[i];
    if (i > 0 && templates_[i - 1].id == t.id)
      throw std::invalid_argument("duplicate template id " + t.id);
    t.pattern.validate();
    aux.insert(t.consumes.begin(), t.consumes.end());
    aux.insert(t.produces.begin(), t.produces.end());
    aux.insert(t.detaches.begin(), t.detaches.end());
  }
  auxiliary_.assign(aux.begin(), aux.end());
}

const ReactionTemplate *RuleSet::find(std::string_view id) const {
  auto it = std::lower_bound(
      templates_.begin(), templates_.end(), id,
      [](const ReactionTemplate &t, std::string_view v) { return t.id < v; });
  if (it == templates_.end() || it->id != id)
    return nullptr;
  return &*it;
}

bool RuleSet::is_auxiliary(const CanonicalForm &form) const {
  return std::binary_search(auxiliary_.begin(), auxiliary_.end(), form);
}

RuleSet RuleSet::subset(std::span<const std::string> prefixes) const {
  std::vector<ReactionTemplate> keep;
  for (const ReactionTemplate &t: templates_) {
    for (const std::string &p: prefixes) {
      if (t.id.compare(0, p.size(), p) == 0) {
        keep.push_back(t);
        break;
      }
    }
  }
  return RuleSet(std::move(keep));
}

std::vector<ReactionInstance>
enumerate_reactions(const RuleSet &rules, std::span<const MolGraph> species) {
  // Deduplicate the input by canonical form; keep the first index.
  std::map<CanonicalForm, int> unique;
  for (int i = 0; i < static_cast<int>(species.size()); ++i)
    unique.try_emplace(canonicalize(species[i]), i);

  using SortKey = std::tuple<std::string, std::string, std::string>;
  std::vector<std::pair<SortKey, ReactionInstance>> out;
  for (const auto &[form, idx]: unique) {
    for (const ReactionTemplate &t: rules.templates()) {
      for (const Match &m: find_matches(t, species[idx])) {
        ReactionInstance inst { t.id, m.site_key, { idx },
                                apply(t, species[idx], m) };
        out.emplace_back(SortKey { t.id, m.site_key, form.text },
                         std::move(inst));
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  std::vector<ReactionInstance> result;
  result.reserve(out.size());
  for (auto &[key, inst]: out)
    result.push_back(std::move(inst));
  return result;
}

} // namespace rxnrl
