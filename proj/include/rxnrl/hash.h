//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_HASH_H_
#define RXNRL_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace rxnrl {

// 64-bit FNV-1a. Used for fingerprints and file checksums so that the
// results are identical on every platform.
class Fnv1a {
public:
  static constexpr std::uint64_t kOffset = 14695981039346656037ULL;
  static constexpr std::uint64_t kPrime = 1099511628211ULL;

  void update(const void *data, std::size_t size) noexcept {
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= p[i];
      state_ *= kPrime;
    }
  }

  void update(std::string_view s) noexcept { update(s.data(), s.size()); }

  void update_u8(std::uint8_t v) noexcept { update(&v, 1); }

  // Little-endian regardless of host byte order.
  void update_u32(std::uint32_t v) noexcept {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i)
      b[i] = static_cast<unsigned char>(v >> (8 * i));
    update(b, 4);
  }

  void update_u64(std::uint64_t v) noexcept {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
      b[i] = static_cast<unsigned char>(v >> (8 * i));
    update(b, 8);
  }

  std::uint64_t digest() const noexcept { return state_; }

private:
  std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::string_view s) noexcept {
  Fnv1a h;
  h.update(s);
  return h.digest();
}

// 16 lowercase hex digits.
std::string to_hex(std::uint64_t v);

} // namespace rxnrl

#endif // RXNRL_HASH_H_
