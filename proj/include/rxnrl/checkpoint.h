//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_CHECKPOINT_H_
#define RXNRL_CHECKPOINT_H_

#include <stdexcept>
#include <string>

#include "rxnrl/policy.h"

namespace rxnrl {

class CheckpointError: public std::runtime_error {
public:
  enum class Kind { kIo, kMagic, kVersion, kTruncated, kChecksum, kShape };

  CheckpointError(Kind kind, const std::string &msg)
      : std::runtime_error(msg), kind_(kind) { }
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// "RXNRLCKP", u32 version, u32 n_bits/d_in/hidden/d_score, u64 parameter
// count, little-endian doubles, u64 FNV-1a of everything before it.
std::string encode_checkpoint(const PolicyParams &params);
PolicyParams decode_checkpoint(const std::string &bytes);

// Writes via a temporary file and rename.
void save_checkpoint(const std::string &path, const PolicyParams &params);
PolicyParams load_checkpoint(const std::string &path);

} // namespace rxnrl

#endif // RXNRL_CHECKPOINT_H_
