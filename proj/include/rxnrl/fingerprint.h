//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_FINGERPRINT_H_
#define RXNRL_FINGERPRINT_H_

#include <cstdint>
#include <vector>

#include "rxnrl/molgraph.h"

namespace rxnrl {

// Fixed-length bit vector. Stored one byte per bit: the vectors are short and
// the agent consumes them as dense inputs.
class Fingerprint {
public:
  Fingerprint() = default;
  explicit Fingerprint(int n_bits): bits_(n_bits, 0) { }

  int size() const noexcept { return static_cast<int>(bits_.size()); }
  bool test(int i) const { return bits_[i] != 0; }
  void set(int i) { bits_[i] = 1; }
  int popcount() const noexcept;

  // Indices of set bits, ascending.
  std::vector<int> on_bits() const;

  Fingerprint &operator|=(const Fingerprint &rhs);

  const std::vector<std::uint8_t> &bits() const noexcept { return bits_; }

  friend bool operator==(const Fingerprint &, const Fingerprint &) = default;

private:
  std::vector<std::uint8_t> bits_;
};

inline constexpr int kDefaultRadius = 2;
inline constexpr int kDefaultFingerprintBits = 1000;

/**
 * Morgan (circular) fingerprint folded to n_bits.
 *
 * Round 0 identifies an atom by (element, charge, hydrogens, degree). Round r
 * hashes the atom's round-0 invariants, r, its own round r - 1 identifier and
 * the sorted (bond order, neighbor identifier) pairs from round r - 1. Every identifier of every
 * round sets bit (id mod n_bits). Hashing is FNV-1a over a little-endian
 * byte encoding, so bits are identical across platforms.
 */
Fingerprint morgan_fingerprint(const MolGraph &mol, int radius = kDefaultRadius,
                               int n_bits = kDefaultFingerprintBits);

} // namespace rxnrl

#endif // RXNRL_FINGERPRINT_H_
