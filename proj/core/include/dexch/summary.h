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

#ifndef DEXCH_SUMMARY_H_
#define DEXCH_SUMMARY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dexch/bits.h"
#include "dexch/ip_hash.h"
#include "dexch/params.h"
#include "dexch/reed_solomon.h"
#include "dexch/small_bias.h"

namespace dexch {

// The transmitted sketch of F.
struct Summary {
  Params params;
  BiasSeed seed;
  HashVector level0;
  // Alg1Random / Deterministic: Reed-Solomon parity of levels 1..L.
  std::vector<std::vector<uint64_t>> rs_parity;
  // Alg2Optimal: verification hash of levels 1..L, and per color class
  // hashes when colors are in use.
  std::vector<Words> verify;
  std::vector<std::vector<Words>> color_verify;
  uint64_t final_check = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

// F followed by zeros up to n_pad bits. Throws kLengthMismatch when
// |f| != params.n.
BitString PadFile(std::span<const uint8_t> f, const Params& params);

// Groups digests_per_symbol consecutive digests into one Reed-Solomon symbol,
// digest i of a group at bits [i * o, (i + 1) * o).
std::vector<uint64_t> PackDigests(std::span<const HashDigest> digests,
                                  const Params& params);
std::vector<HashDigest> UnpackDigests(std::span<const uint64_t> symbols,
                                      uint64_t count, const Params& params);

// The Reed-Solomon code protecting `level` (>= 1).
RsCode LevelCode(const Params& params, int level);

// Color class of every block of `level`.
std::vector<int> ColorAssignment(const RandTable& table, int level);

// Summary of `f` (n bits) under an explicit seed.
Summary BuildSummaryWithSeed(std::span<const uint8_t> f, const Params& params,
                             const BiasSeed& seed);

// Randomized schemes; the seed is sampled from `entropy`.
Summary BuildSummaryRandomized(std::span<const uint8_t> f, const Params& params,
                               std::span<const uint8_t> entropy);

struct DeterministicOptions {
  int cap_bits = kDefaultEnumerationCapBits;  // at most 2^cap candidates
  int threads = 1;
};

struct SeedSearchStats {
  uint64_t seeds_tried = 0;
  uint64_t accepted_index = 0;
};

// Whether `table` admits no k-bad self-matching of `f_padded` at any level.
// Levels are searched exhaustively when n_pad <= 2^12 and within an offset
// band of 2k otherwise.
bool SeedIsGood(std::span<const uint8_t> f_padded, const RandTable& table);

// Deterministic scheme: the first seed, in enumeration order, that passes
// SeedIsGood. Throws kSeedSearchExhausted when none of the candidates
// qualifies.
Summary BuildSummaryDeterministic(std::span<const uint8_t> f,
                                  const Params& params,
                                  const DeterministicOptions& options = {},
                                  SeedSearchStats* stats = nullptr);

// The BiasSeed a deterministic search tries at enumeration position `index`.
BiasSeed DeterministicCandidate(const Params& params, uint64_t index);

inline constexpr uint16_t kSummaryVersion = 1;

std::vector<uint8_t> SerializeSummary(const Summary& s);
// Length of SerializeSummary's output for any summary with these parameters.
uint64_t SerializedSummaryBytes(const Params& params);
// Throws kBadMagic, kVersionMismatch, kTruncation, kLengthMismatch,
// kChecksumMismatch or kInvalidArgument on malformed input.
Summary DeserializeSummary(std::span<const uint8_t> bytes);

}  // namespace dexch

#endif  // DEXCH_SUMMARY_H_
