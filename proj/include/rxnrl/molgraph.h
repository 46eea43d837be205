//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_MOLGRAPH_H_
#define RXNRL_MOLGRAPH_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rxnrl {

enum class Element : std::uint8_t {
  kC = 6,
  kO = 8,
};

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
};

const char *element_symbol(Element e) noexcept;

// Number of bonds (including hydrogens) an atom of this element carries at
// the given formal charge: C 4 - |q|, O 2 + q.
int standard_valence(Element e, int formal_charge) noexcept;

struct Atom {
  Element element = Element::kC;
  int formal_charge = 0;
  int implicit_h = 0;

  friend bool operator==(const Atom &, const Atom &) = default;
};

struct Bond {
  int src = 0;
  int dst = 0;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const noexcept { return atom == src ? dst : src; }

  friend bool operator==(const Bond &, const Bond &) = default;
};

struct Neighbor {
  int atom;
  int bond;
  BondOrder order;
};

struct Formula {
  int c = 0;
  int o = 0;
  int h = 0;

  Formula &operator+=(const Formula &rhs) noexcept {
    c += rhs.c;
    o += rhs.o;
    h += rhs.h;
    return *this;
  }

  friend bool operator==(const Formula &, const Formula &) = default;
};

class MolError: public std::runtime_error {
public:
  enum class Kind {
    kValence,
    kCharge,
    kBond,
    kDisconnected,
  };

  MolError(Kind kind, int atom, const std::string &what)
      : std::runtime_error(what), kind_(kind), atom_(atom) { }

  Kind kind() const noexcept { return kind_; }
  // Offending atom index, or -1 when not atom specific.
  int atom() const noexcept { return atom_; }

private:
  Kind kind_;
  int atom_;
};

// Heavy-atom graph of a single molecule. Hydrogens are implicit counts.
// Immutable once constructed; every instance satisfies the valence rule
// at every atom.
class MolGraph {
public:
  MolGraph() = default;

  // Validates charges, bonds and valences. Connectivity is checked
  // separately (see is_connected()) because rule application creates
  // transiently disconnected graphs that are split into components.
  MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  int size() const noexcept { return static_cast<int>(atoms_.size()); }
  bool empty() const noexcept { return atoms_.empty(); }

  const Atom &atom(int i) const { return atoms_[i]; }
  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  const std::vector<Bond> &bonds() const noexcept { return bonds_; }

  std::span<const Neighbor> neighbors(int i) const {
    return { adj_.data() + adj_offset_[i],
             adj_.data() + adj_offset_[i + 1] };
  }

  int degree(int i) const { return adj_offset_[i + 1] - adj_offset_[i]; }

  // 0 when the atoms are not bonded.
  int bond_order(int a, int b) const;

  bool atom_in_ring(int i) const { return atom_ring_[i] != 0; }
  bool bond_in_ring(int a, int b) const;

  bool is_connected() const;
  // Atom index lists, each sorted, ordered by smallest member.
  std::vector<std::vector<int>> components() const;
  MolGraph subgraph(const std::vector<int> &atoms) const;

  // Atom i of the result is atom perm[i] of this graph.
  MolGraph permuted(std::span<const int> perm) const;

  Formula formula() const noexcept;
  int net_charge() const noexcept;

private:
  void build_adjacency();
  void find_ring_bonds();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> adj_offset_ { 0 };
  std::vector<Neighbor> adj_;
  std::vector<char> atom_ring_;
  std::vector<char> bond_ring_;
};

} // namespace rxnrl

#endif // RXNRL_MOLGRAPH_H_
