//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_CANONICAL_H_
#define RXNRL_CANONICAL_H_

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "rxnrl/molgraph.h"

namespace rxnrl {

// Canonical SMILES of a molecule. Byte equality of two forms is equivalent
// to isomorphism of the molecules (element, charge, hydrogens, bond order).
struct CanonicalForm {
  std::string text;

  friend auto operator<=>(const CanonicalForm &,
                          const CanonicalForm &) = default;
  friend bool operator==(const CanonicalForm &,
                         const CanonicalForm &) = default;
};

/**
 * Canonical labeling by iterative neighborhood refinement followed by an
 * individualization search over every non-trivial cell. Each leaf of the
 * search yields a labeling; the one with the lexicographically smallest
 * SMILES wins, so the result is exact rather than hash based.
 *
 * order[i] is the atom that receives canonical position i. Optional labels
 * (one per atom, 0 = unlabeled) take part in both the refinement and the leaf
 * comparison.
 */
std::vector<int> canonical_order(const MolGraph &mol,
                                 std::span<const int> labels = {});

// Atom refinement classes after stable refinement without
// individualization. Automorphic atoms always share a class.
std::vector<int> refined_classes(const MolGraph &mol);

// Throws MolError(kDisconnected) for empty or disconnected input.
CanonicalForm canonicalize(const MolGraph &mol);

// Canonical SMILES with labeled atoms written as "[C:k]". Two labeled graphs
// give equal strings iff an isomorphism maps labels onto equal labels.
std::string canonical_labeled_smiles(const MolGraph &mol,
                                     std::span<const int> labels);

// The molecule renumbered into canonical order.
MolGraph canonical_graph(const MolGraph &mol);

} // namespace rxnrl

#endif // RXNRL_CANONICAL_H_
