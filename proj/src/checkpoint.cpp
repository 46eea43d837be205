//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/checkpoint.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rxnrl/hash.h"

namespace rxnrl {

namespace {

constexpr char kMagic[8] = { 'R', 'X', 'N', 'R', 'L', 'C', 'K', 'P' };

void put_le(std::string &out, std::uint64_t v, int n) {
  for (int i = 0; i < n; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
  explicit Reader(const std::string &s): s_(s) { }

  std::uint64_t le(int n) {
    if (pos_ + n > s_.size())
      throw CheckpointError(CheckpointError::Kind::kTruncated,
                            "checkpoint truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(s_[pos_ + i]))
           << (8 * i);
    pos_ += n;
    return v;
  }
  std::size_t pos() const { return pos_; }

private:
  const std::string &s_;
  std::size_t pos_ = 0;
};

} // namespace

std::string encode_checkpoint(const PolicyParams &params) {
  std::string out(kMagic, sizeof kMagic);
  const PolicyShape &s = params.shape();
  put_le(out, kCheckpointVersion, 4);
  for (int d: { s.n_bits, s.d_in, s.hidden, s.d_score })
    put_le(out, static_cast<std::uint32_t>(d), 4);
  put_le(out, params.size(), 8);
  for (Eigen::Index i = 0; i < params.data().size(); ++i)
    put_le(out, std::bit_cast<std::uint64_t>(params.data()[i]), 8);
  put_le(out, fnv1a(out), 8);
  return out;
}

PolicyParams decode_checkpoint(const std::string &bytes) {
  using Kind = CheckpointError::Kind;
  if (bytes.size() < sizeof kMagic
      || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw CheckpointError(Kind::kMagic, "not a checkpoint file");
  Reader in(bytes);
  in.le(8);
  const auto version = in.le(4);
  if (version != kCheckpointVersion)
    throw CheckpointError(Kind::kVersion, "unsupported checkpoint version "
                                              + std::to_string(version));
  PolicyShape s;
  s.n_bits = static_cast<int>(in.le(4));
  s.d_in = static_cast<int>(in.le(4));
  s.hidden = static_cast<int>(in.le(4));
  s.d_score = static_cast<int>(in.le(4));
  const std::uint64_t count = in.le(8);
  if (s.n_bits < 1 || s.d_in < 1 || s.hidden < 1 || s.d_score < 1
      || s.n_bits > (1 << 20) || s.d_in > 4096 || s.hidden > 4096
      || s.d_score > 4096)
    throw CheckpointError(Kind::kShape, "implausible checkpoint shape");
  PolicyParams p(s);
  if (count != p.size())
    throw CheckpointError(Kind::kShape,
                          "parameter count does not match shape");
  if (bytes.size() != in.pos() + 8 * count + 8)
    throw CheckpointError(Kind::kTruncated, "checkpoint size mismatch");
  for (std::uint64_t i = 0; i < count; ++i)
    p.data()[i] = std::bit_cast<double>(in.le(8));
  const std::size_t body = in.pos();
  if (in.le(8) != fnv1a(std::string_view(bytes.data(), body)))
    throw CheckpointError(Kind::kChecksum, "checkpoint checksum mismatch");
  return p;
}

void save_checkpoint(const std::string &path, const PolicyParams &params) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << encode_checkpoint(params);
    if (!out)
      throw CheckpointError(CheckpointError::Kind::kIo,
                            "cannot write " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw CheckpointError(CheckpointError::Kind::kIo,
                          "cannot rename to " + path + ": " + ec.message());
}

PolicyParams load_checkpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CheckpointError(CheckpointError::Kind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_checkpoint(ss.str());
}

} // namespace rxnrl
