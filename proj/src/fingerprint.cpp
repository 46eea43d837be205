//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/fingerprint.h"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rxnrl/hash.h"

namespace rxnrl {

int Fingerprint::popcount() const noexcept {
  int c = 0;
  for (std::uint8_t b: bits_)
    c += b;
  return c;
}

std::vector<int> Fingerprint::on_bits() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (bits_[i])
      out.push_back(i);
  }
  return out;
}

Fingerprint &Fingerprint::operator|=(const Fingerprint &rhs) {
  if (rhs.size() != size())
    throw std::invalid_argument("fingerprint length mismatch");
  for (int i = 0; i < size(); ++i)
    bits_[i] |= rhs.bits_[i];
  return *this;
}

namespace {

void hash_invariants(Fnv1a &h, const MolGraph &mol, int i) {
  const Atom &a = mol.atom(i);
  h.update_u8(static_cast<std::uint8_t>(a.element));
  h.update_u8(static_cast<std::uint8_t>(static_cast<std::int8_t>(a.formal_charge)));
  h.update_u8(static_cast<std::uint8_t>(a.implicit_h));
  h.update_u8(static_cast<std::uint8_t>(mol.degree(i)));
}

} // namespace

Fingerprint morgan_fingerprint(const MolGraph &mol, int radius, int n_bits) {
  if (radius < 0 || n_bits < 1)
    throw std::invalid_argument("radius must be >= 0 and n_bits >= 1");

  Fingerprint fp(n_bits);
  const int n = mol.size();
  std::vector<std::uint64_t> ids(n), next(n);
  for (int i = 0; i < n; ++i) {
    Fnv1a h;
    hash_invariants(h, mol, i);
    ids[i] = h.digest();
    fp.set(static_cast<int>(ids[i] % static_cast<std::uint64_t>(n_bits)));
  }

  std::vector<std::pair<std::uint8_t, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    for (int i = 0; i < n; ++i) {
      env.clear();
      for (const Neighbor &nb: mol.neighbors(i))
        env.emplace_back(static_cast<std::uint8_t>(nb.order), ids[nb.atom]);
      std::sort(env.begin(), env.end());

      Fnv1a h;
      hash_invariants(h, mol, i);
      h.update_u32(static_cast<std::uint32_t>(r));
      h.update_u64(ids[i]);
      for (const auto &[order, id]: env) {
        h.update_u8(order);
        h.update_u64(id);
      }
      next[i] = h.digest();
      fp.set(static_cast<int>(next[i] % static_cast<std::uint64_t>(n_bits)));
    }
    std::swap(ids, next);
  }
  return fp;
}

} // namespace rxnrl
