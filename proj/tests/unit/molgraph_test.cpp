//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "../fixtures.h"
#include "rxnrl/canonical.h"
#include "rxnrl/fingerprint.h"
#include "rxnrl/random.h"
#include "rxnrl/smiles.h"

namespace rxnrl {
namespace {

using namespace rxnrl::testing;

MolGraph shuffled(const MolGraph &m, Rng &rng) {
  std::vector<int> perm(m.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.below(i)]);
  return m.permuted(perm);
}

SmilesError::Kind parse_error_kind(const std::string &s) {
  try {
    parse_smiles(s);
  } catch (const SmilesError &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << s;
  return SmilesError::Kind::kSyntax;
}

TEST(Smiles, Water) {
  const MolGraph m = parse_smiles("O");
  ASSERT_EQ(m.size(), 1);
  EXPECT_EQ(m.atom(0).element, Element::kO);
  EXPECT_EQ(m.atom(0).implicit_h, 2);
  EXPECT_EQ(m.atom(0).formal_charge, 0);
  EXPECT_EQ(write_smiles(m), "O");
}

TEST(Smiles, Hydronium) {
  const MolGraph m = parse_smiles("[OH3+]");
  ASSERT_EQ(m.size(), 1);
  EXPECT_EQ(m.atom(0).implicit_h, 3);
  EXPECT_EQ(m.atom(0).formal_charge, 1);
  EXPECT_EQ(write_smiles(m), "[OH3+]");
}

TEST(Smiles, OpenChainFructose) {
  const MolGraph m = parse_smiles(kFructose);
  EXPECT_EQ(m.size(), 12);
  EXPECT_EQ(m.formula(), (Formula { 6, 6, 12 }));
  int doubles = 0;
  for (const Bond &b: m.bonds())
    doubles += b.order == BondOrder::kDouble;
  EXPECT_EQ(doubles, 1);
  EXPECT_EQ(m.net_charge(), 0);
}

TEST(Smiles, KekuleHmf) {
  const MolGraph m = parse_smiles(kHmf);
  EXPECT_EQ(m.formula(), (Formula { 6, 3, 6 }));
}

TEST(Smiles, ErrorKinds) {
  EXPECT_EQ(parse_error_kind("OCc1ccc(C=O)o1"), SmilesError::Kind::kUnsupported);
  EXPECT_EQ(parse_error_kind("C(C"), SmilesError::Kind::kSyntax);
  EXPECT_EQ(parse_error_kind("C1CC"), SmilesError::Kind::kUnmatchedRing);
  EXPECT_EQ(parse_error_kind("C(=O)(=O)=O"), SmilesError::Kind::kValence);
  EXPECT_EQ(parse_error_kind("[N]"), SmilesError::Kind::kUnsupported);
  EXPECT_EQ(parse_error_kind("C[C@H](O)C"), SmilesError::Kind::kUnsupported);
  EXPECT_EQ(parse_error_kind("[13C]"), SmilesError::Kind::kUnsupported);
}

TEST(Smiles, ErrorCarriesPosition) {
  try {
    parse_smiles("CC)");
    FAIL();
  } catch (const SmilesError &e) {
    EXPECT_EQ(e.position(), 2);
  }
}

TEST(Smiles, RingClosureForms) {
  const CanonicalForm a = canonicalize(parse_smiles("C1CCCCO1"));
  const CanonicalForm b = canonicalize(parse_smiles("C%12CCCCO%12"));
  EXPECT_EQ(a, b);
}

TEST(Smiles, RoundTripOnNetworkSpecies) {
  const auto net = fructose_network();
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const Species &s = net->species[rng.below(net->species.size())];
    const MolGraph m = shuffled(s.graph, rng);
    const MolGraph back = parse_smiles(write_smiles(m));
    EXPECT_EQ(canonicalize(back), s.canonical) << write_smiles(m);
  }
}

TEST(Canonical, AtomOrderInvariant) {
  EXPECT_EQ(canonicalize(parse_smiles(kFructose)),
            canonicalize(parse_smiles("C(O)C(O)C(O)C(O)C(=O)CO")));
}

TEST(Canonical, ChargeAndHydrogenMatter) {
  EXPECT_NE(canonicalize(parse_smiles("O")),
            canonicalize(parse_smiles("[OH3+]")));
  EXPECT_NE(canonicalize(parse_smiles("CC=O")),
            canonicalize(parse_smiles("C=CO")));
}

TEST(Canonical, Permutations) {
  const MolGraph f = parse_smiles(kFructose);
  Rng rng(1);
  std::set<std::string> forms;
  for (int k = 0; k < 300; ++k)
    forms.insert(canonicalize(shuffled(f, rng)).text);
  EXPECT_EQ(forms.size(), 1u);
}

TEST(Canonical, CanonicalTextReparsesToItself) {
  for (const char *s: { kFructose, kHmf, "C1(CO)(O)OCC(O)C1O", "[OH3+]" }) {
    const CanonicalForm c = canonicalize(parse_smiles(s));
    EXPECT_EQ(canonicalize(parse_smiles(c.text)), c);
    EXPECT_EQ(write_smiles(canonical_graph(parse_smiles(s))), c.text);
  }
}

TEST(Canonical, DisconnectedRejected) {
  EXPECT_THROW(canonicalize(parse_smiles("C.O")), std::exception);
}

TEST(Fingerprint, SingleAtom) {
  const Fingerprint fp = morgan_fingerprint(parse_smiles("O"), 0, 8);
  EXPECT_EQ(fp.size(), 8);
  EXPECT_EQ(fp.popcount(), 1);
}

TEST(Fingerprint, PermutationInvariant) {
  const MolGraph f = parse_smiles(kFructose);
  Rng rng(3);
  const Fingerprint ref = morgan_fingerprint(f);
  for (int k = 0; k < 20; ++k)
    EXPECT_EQ(morgan_fingerprint(shuffled(f, rng)), ref);
}

TEST(Fingerprint, FructoseDiffersFromHmf) {
  const Fingerprint a = morgan_fingerprint(parse_smiles(kFructose));
  const Fingerprint b = morgan_fingerprint(parse_smiles(kHmf));
  EXPECT_EQ(a.size(), 1000);
  EXPECT_NE(a, b);
}

TEST(Fingerprint, OrPopcountBound) {
  Fingerprint a = morgan_fingerprint(parse_smiles(kFructose));
  const Fingerprint b = morgan_fingerprint(parse_smiles(kHmf));
  const int pa = a.popcount(), pb = b.popcount();
  a |= b;
  EXPECT_LE(a.popcount(), pa + pb);
  EXPECT_GE(a.popcount(), std::max(pa, pb));
}

// Frozen output of the FNV-1a encoding; guards cross-platform stability.
TEST(Fingerprint, PinnedBits) {
  EXPECT_EQ(morgan_fingerprint(parse_smiles("O")).on_bits(),
            (std::vector<int> { 587, 597, 919 }));
}

} // namespace
} // namespace rxnrl
