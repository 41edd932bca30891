// Copyright 2026 The dexch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dexch/ip_hash.h"

#include "dexch/error.h"

namespace dexch {

HashDigest HashBlock(std::span<const uint8_t> bits, uint64_t s,
                     std::span<const uint64_t> rows, int o) {
  if (bits.size() <= static_cast<size_t>(o)) {
    HashDigest d = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
      d |= static_cast<HashDigest>(bits[i] & 1) << i;
    }
    return d;
  }
  if (s + bits.size() > rows.size()) {
    throw Error(ErrorCode::kOutOfRange, "block extends past the table");
  }
  HashDigest d = 0;
  const uint64_t* r = rows.data() + s;
  for (size_t j = 0; j < bits.size(); ++j) {
    d ^= r[j] & (uint64_t{0} - (bits[j] & 1));
  }
  return d & LowMask(o);
}

HashDigest HashBlock(std::span<const uint8_t> bits, uint64_t s, int level,
                     const RandTable& table) {
  const Params& p = table.params();
  if (level < 0 || level > p.levels || s + bits.size() > p.n_pad) {
    throw Error(ErrorCode::kOutOfRange, "block outside the table");
  }
  if (bits.size() <= static_cast<size_t>(p.o)) {
    return HashBlock(bits, 0, std::span<const uint64_t>(), p.o);
  }
  const auto rows = table.RegionRows(table.layout().HashRegion(level), s,
                                     bits.size(), p.o);
  return HashBlock(bits, 0, rows, p.o);
}

HashVector HashLevel(std::span<const uint8_t> f_padded, int level,
                     std::span<const uint64_t> rows, const Params& params) {
  if (level < 0 || level > params.levels) {
    throw Error(ErrorCode::kOutOfRange, "level out of range");
  }
  if (f_padded.size() != params.n_pad) {
    throw Error(ErrorCode::kLengthMismatch, "padded file has wrong length");
  }
  HashVector out;
  out.level = level;
  out.width = params.o;
  const uint64_t block = params.BlockLength(level);
  const uint64_t count = params.BlockCount(level);
  out.digests.resize(count);
  for (uint64_t j = 0; j < count; ++j) {
    out.digests[j] =
        HashBlock(f_padded.subspan(j * block, block), j * block, rows, params.o);
  }
  return out;
}

HashVector HashLevel(std::span<const uint8_t> f_padded, int level,
                     const RandTable& table) {
  const Params& p = table.params();
  if (level < 0 || level > p.levels) {
    throw Error(ErrorCode::kOutOfRange, "level out of range");
  }
  std::vector<uint64_t> rows;
  if (p.BlockLength(level) > static_cast<uint64_t>(p.o)) {
    rows = table.HashRows(level);
  }
  return HashLevel(f_padded, level, rows, p);
}

DigestStringHasher::DigestStringHasher(const RandTable& table,
                                       const Region& region,
                                       uint64_t digest_count, int o, int width)
    : o_(o), width_(width), digest_count_(digest_count) {
  if (width <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "hash width must be positive");
  }
  if (digest_count * o > static_cast<uint64_t>(width)) {
    rows_ = table.RegionRows(region, 0, digest_count * o, width);
  }
}

void DigestStringHasher::AddContribution(Words& acc, uint64_t input_bits,
                                         uint64_t local,
                                         uint64_t global) const {
  if (input_bits <= static_cast<uint64_t>(width_)) {
    acc[local / 64] ^= uint64_t{1} << (local % 64);
    return;
  }
  if (rows_.empty()) {
    throw Error(ErrorCode::kOutOfRange,
                "subset larger than the output but rows were not loaded");
  }
  const size_t w = words();
  const uint64_t* row = rows_.data() + global * w;
  for (size_t i = 0; i < w; ++i) acc[i] ^= row[i];
}

Words DigestStringHasher::Hash(std::span<const HashDigest> digests) const {
  if (digests.size() != digest_count_) {
    throw Error(ErrorCode::kLengthMismatch, "digest count mismatch");
  }
  Words acc(words(), 0);
  const uint64_t input_bits = digest_count_ * o_;
  for (uint64_t p = 0; p < digest_count_; ++p) {
    for (int b = 0; b < o_; ++b) {
      if ((digests[p] >> b) & 1) {
        const uint64_t q = p * o_ + b;
        AddContribution(acc, input_bits, q, q);
      }
    }
  }
  return acc;
}

Words DigestStringHasher::HashSubset(
    std::span<const HashDigest> digests,
    std::span<const uint64_t> positions) const {
  Words acc(words(), 0);
  const uint64_t input_bits = positions.size() * o_;
  for (size_t idx = 0; idx < positions.size(); ++idx) {
    const uint64_t p = positions[idx];
    if (p >= digests.size() || p >= digest_count_) {
      throw Error(ErrorCode::kOutOfRange, "digest position out of range");
    }
    for (int b = 0; b < o_; ++b) {
      if ((digests[p] >> b) & 1) {
        AddContribution(acc, input_bits, idx * o_ + b, p * o_ + b);
      }
    }
  }
  return acc;
}

uint64_t FinalCheckHash(std::span<const uint8_t> f_padded,
                        const RandTable& table) {
  const Params& p = table.params();
  if (f_padded.size() != p.n_pad) {
    throw Error(ErrorCode::kLengthMismatch, "padded file has wrong length");
  }
  if (p.n_pad <= static_cast<uint64_t>(Params::kFinalCheckWidth)) {
    return HashBlock(f_padded, 0, std::span<const uint64_t>(),
                     Params::kFinalCheckWidth);
  }
  const auto rows = table.RegionRows(table.layout().FinalRegion(), 0, p.n_pad,
                                     Params::kFinalCheckWidth);
  return HashBlock(f_padded, 0, rows, Params::kFinalCheckWidth);
}

}  // namespace dexch
