//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_SMILES_H_
#define RXNRL_SMILES_H_

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rxnrl/molgraph.h"

namespace rxnrl {

class SmilesError: public std::runtime_error {
public:
  enum class Kind {
    kSyntax,
    kValence,
    kUnmatchedRing,
    kUnsupported,
  };

  // position is the byte offset in the input for syntax-level errors, and
  // the atom index for valence errors.
  SmilesError(Kind kind, int position, const std::string &what)
      : std::runtime_error(what), kind_(kind), position_(position) { }

  Kind kind() const noexcept { return kind_; }
  int position() const noexcept { return position_; }

private:
  Kind kind_;
  int position_;
};

/**
 * Parse a SMILES string restricted to the C/O subset documented in
 * docs/smiles_grammar.md.
 *
 * Plain atoms receive hydrogens from the default valence; bracket atoms take
 * their hydrogen count and charge literally. The result is always a single
 * connected molecule.
 *
 * @throws SmilesError with a distinct kind for syntax errors, valence
 *         violations, unmatched ring closures and unsupported features.
 */
MolGraph parse_smiles(std::string_view text);

// Depth-first SMILES following atom index order.
std::string write_smiles(const MolGraph &mol);

// Depth-first SMILES where lower rank is visited first. Used by the
// canonicalizer; rank must be a permutation of 0..n-1.
//
// Atoms with a positive entry in classes are written as bracket atoms with an
// atom-class suffix ("[CH2:3]"). This output is a key, not parseable input.
std::string write_smiles_ranked(const MolGraph &mol, std::span<const int> rank,
                                std::span<const int> classes = {});

} // namespace rxnrl

#endif // RXNRL_SMILES_H_
