//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/molgraph.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "rxnrl/hash.h"

namespace rxnrl {

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

const char *element_symbol(Element e) noexcept {
  switch (e) {
  case Element::kC:
    return "C";
  case Element::kO:
    return "O";
  }
  return "?";
}

int standard_valence(Element e, int formal_charge) noexcept {
  switch (e) {
  case Element::kC:
    return 4 - std::abs(formal_charge);
  case Element::kO:
    return 2 + formal_charge;
  }
  return 0;
}

MolGraph::MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    const Atom &a = atoms_[i];
    if (a.formal_charge < -1 || a.formal_charge > 1)
      throw MolError(MolError::Kind::kCharge, i,
                     "formal charge out of range at atom "
                         + std::to_string(i));
    if (a.implicit_h < 0)
      throw MolError(MolError::Kind::kValence, i,
                     "negative hydrogen count at atom " + std::to_string(i));
  }

  for (Bond &b: bonds_) {
    if (b.src < 0 || b.dst < 0 || b.src >= n || b.dst >= n || b.src == b.dst)
      throw MolError(MolError::Kind::kBond, -1, "invalid bond endpoints");
    if (b.src > b.dst)
      std::swap(b.src, b.dst);
  }

  build_adjacency();

  for (int i = 0; i < n; ++i) {
    int sum = atoms_[i].implicit_h;
    for (const Neighbor &nb: neighbors(i)) {
      if (nb.atom == i)
        throw MolError(MolError::Kind::kBond, i, "self bond");
      sum += static_cast<int>(nb.order);
    }
    for (int k = adj_offset_[i] + 1; k < adj_offset_[i + 1]; ++k) {
      if (adj_[k].atom == adj_[k - 1].atom)
        throw MolError(MolError::Kind::kBond, i,
                       "duplicate bond at atom " + std::to_string(i));
    }
    if (sum != standard_valence(atoms_[i].element, atoms_[i].formal_charge))
      throw MolError(MolError::Kind::kValence, i,
                     "valence violation at atom " + std::to_string(i));
  }

  find_ring_bonds();
}

void MolGraph::build_adjacency() {
  const int n = size();
  std::vector<int> deg(n, 0);
  for (const Bond &b: bonds_) {
    ++deg[b.src];
    ++deg[b.dst];
  }
  adj_offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    adj_offset_[i + 1] = adj_offset_[i] + deg[i];

  adj_.assign(adj_offset_[n], Neighbor { 0, 0, BondOrder::kSingle });
  std::vector<int> fill(adj_offset_.begin(), adj_offset_.end() - 1);
  for (int k = 0; k < static_cast<int>(bonds_.size()); ++k) {
    const Bond &b = bonds_[k];
    adj_[fill[b.src]++] = { b.dst, k, b.order };
    adj_[fill[b.dst]++] = { b.src, k, b.order };
  }
  for (int i = 0; i < n; ++i) {
    std::sort(adj_.begin() + adj_offset_[i], adj_.begin() + adj_offset_[i + 1],
              [](const Neighbor &x, const Neighbor &y) {
                return x.atom < y.atom;
              });
  }
}

// A bond is a ring bond iff it is not a bridge.
void MolGraph::find_ring_bonds() {
  const int n = size();
  const int m = static_cast<int>(bonds_.size());
  atom_ring_.assign(n, 0);
  bond_ring_.assign(m, 0);

  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;

  // Iterative Tarjan bridge search.
  struct Frame {
    int atom;
    int parent_bond;
    int next;
  };
  std::vector<Frame> stack;
  std::vector<char> bridge(m, 0);
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0)
      continue;
    disc[root] = low[root] = timer++;
    stack.push_back({ root, -1, adj_offset_[root] });
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next < adj_offset_[f.atom + 1]) {
        const Neighbor &nb = adj_[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({ nb.atom, nb.bond, adj_offset_[nb.atom] });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          Frame &p = stack.back();
          low[p.atom] = std::min(low[p.atom], low[done.atom]);
          if (low[done.atom] > disc[p.atom])
            bridge[done.parent_bond] = 1;
        }
      }
    }
  }

  for (int k = 0; k < m; ++k) {
    if (bridge[k])
      continue;
    bond_ring_[k] = 1;
    atom_ring_[bonds_[k].src] = 1;
    atom_ring_[bonds_[k].dst] = 1;
  }
}

int MolGraph::bond_order(int a, int b) const {
  for (const Neighbor &nb: neighbors(a)) {
    if (nb.atom == b)
      return static_cast<int>(nb.order);
  }
  return 0;
}

bool MolGraph::bond_in_ring(int a, int b) const {
  for (const Neighbor &nb: neighbors(a)) {
    if (nb.atom == b)
      return bond_ring_[nb.bond] != 0;
  }
  return false;
}

std::vector<std::vector<int>> MolGraph::components() const {
  const int n = size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0)
      continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    queue.assign(1, s);
    comp[s] = id;
    while (!queue.empty()) {
      const int u = queue.back();
      queue.pop_back();
      out[id].push_back(u);
      for (const Neighbor &nb: neighbors(u)) {
        if (comp[nb.atom] < 0) {
          comp[nb.atom] = id;
          queue.push_back(nb.atom);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

bool MolGraph::is_connected() const {
  return size() > 0 && components().size() == 1;
}

MolGraph MolGraph::subgraph(const std::vector<int> &atoms) const {
  std::vector<int> remap(size(), -1);
  std::vector<Atom> sub_atoms;
  sub_atoms.reserve(atoms.size());
  for (int i: atoms) {
    remap[i] = static_cast<int>(sub_atoms.size());
    sub_atoms.push_back(atoms_[i]);
  }
  std::vector<Bond> sub_bonds;
  for (const Bond &b: bonds_) {
    if (remap[b.src] >= 0 && remap[b.dst] >= 0)
      sub_bonds.push_back({ remap[b.src], remap[b.dst], b.order });
  }
  return MolGraph(std::move(sub_atoms), std::move(sub_bonds));
}

MolGraph MolGraph::permuted(std::span<const int> perm) const {
  const int n = size();
  std::vector<int> inv(n);
  std::vector<Atom> atoms(n);
  for (int i = 0; i < n; ++i) {
    atoms[i] = atoms_[perm[i]];
    inv[perm[i]] = i;
  }
  std::vector<Bond> bonds;
  bonds.reserve(bonds_.size());
  for (const Bond &b: bonds_)
    bonds.push_back({ inv[b.src], inv[b.dst], b.order });
  return MolGraph(std::move(atoms), std::move(bonds));
}

Formula MolGraph::formula() const noexcept {
  Formula f;
  for (const Atom &a: atoms_) {
    if (a.element == Element::kC)
      ++f.c;
    else
      ++f.o;
    f.h += a.implicit_h;
  }
  return f;
}

int MolGraph::net_charge() const noexcept {
  int q = 0;
  for (const Atom &a: atoms_)
    q += a.formal_charge;
  return q;
}

} // namespace rxnrl
