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

#ifndef DEXCH_IP_HASH_H_
#define DEXCH_IP_HASH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dexch/bits.h"
#include "dexch/params.h"
#include "dexch/small_bias.h"

namespace dexch {

// Multi-word bit vector: bit i lives in word i / 64 at position i % 64.
using Words = std::vector<uint64_t>;

// An o-bit digest; bit i holds output bit h_{i+1}. Width is tracked by the
// owning HashVector.
using HashDigest = uint64_t;

struct HashVector {
  int level = 0;
  int width = 0;
  std::vector<HashDigest> digests;  // 4k * 2^level entries

  friend bool operator==(const HashVector&, const HashVector&) = default;
};

// Inner-product hash of `bits` placed at table position `s`. `rows` holds
// the table rows of the level (row t = R[t, level, 0..o-1]). Blocks of at
// most `o` bits hash to themselves, zero-padded.
HashDigest HashBlock(std::span<const uint8_t> bits, uint64_t s,
                     std::span<const uint64_t> rows, int o);

// Same, reading only the needed rows from the table. Throws kOutOfRange when
// s + |bits| exceeds n_pad.
HashDigest HashBlock(std::span<const uint8_t> bits, uint64_t s, int level,
                     const RandTable& table);

// Digest of every block of `f_padded` at `level`. Throws kOutOfRange for
// level > L and kLengthMismatch when |f_padded| != n_pad.
HashVector HashLevel(std::span<const uint8_t> f_padded, int level,
                     const RandTable& table);
HashVector HashLevel(std::span<const uint8_t> f_padded, int level,
                     std::span<const uint64_t> rows, const Params& params);

// Hash of a string of digests (or a subset of them) into `width` bits using
// a region of an auxiliary lane. Digest bit b of digest p sits at global
// coordinate p * o + b; the inner-product row for that coordinate is the
// region row with the same index. Inputs of at most `width` bits pass
// through unchanged (zero-padded), in digest order. The map is linear in the
// digest bits, which recovery relies on.
class DigestStringHasher {
 public:
  DigestStringHasher(const RandTable& table, const Region& region,
                     uint64_t digest_count, int o, int width);

  int width() const { return width_; }
  int digest_width() const { return o_; }
  size_t words() const { return BiasedStream::WordsPerRow(width_); }

  Words Hash(std::span<const HashDigest> digests) const;
  // Only digests listed in `positions` (ascending) contribute.
  Words HashSubset(std::span<const HashDigest> digests,
                   std::span<const uint64_t> positions) const;

  // Output contribution of a single set input bit. `local` is the bit's
  // index among the hashed bits and `global` its coordinate p * o + b;
  // `input_bits` is the total hashed bit count.
  void AddContribution(Words& acc, uint64_t input_bits, uint64_t local,
                       uint64_t global) const;

 private:
  int o_;
  int width_;
  uint64_t digest_count_;
  std::vector<uint64_t> rows_;
};

// 64-bit whole-file check over the final region.
uint64_t FinalCheckHash(std::span<const uint8_t> f_padded,
                        const RandTable& table);

}  // namespace dexch

#endif  // DEXCH_IP_HASH_H_
