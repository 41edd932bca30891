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

#ifndef DEXCH_SMALL_BIAS_H_
#define DEXCH_SMALL_BIAS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dexch/bits.h"
#include "dexch/params.h"

namespace dexch {

// One lane of the powering construction: seed (x, y) in GF(2^m)^2, bit j of
// the stream is <x, y^j> over GF(2). Any fixed nonempty parity over the
// first N bits has bias at most (N - 1) / 2^(m+1).
struct LaneSeed {
  int m = 0;
  uint64_t x = 0;
  uint64_t y = 0;

  int width_bits() const { return 2 * m; }
  friend bool operator==(const LaneSeed&, const LaneSeed&) = default;
};

struct BiasSeed {
  std::vector<LaneSeed> lanes;
  int bias_exponent = 0;

  int total_width_bits() const;
  friend bool operator==(const BiasSeed&, const BiasSeed&) = default;
};

// Seed section: u16 lane count, then per lane u16 width and the lane bits
// (x then y, each m bits, little-endian) padded to a byte boundary.
void AppendSeed(std::vector<uint8_t>& out, const BiasSeed& seed);
// Advances `offset`; throws kTruncation / kInvalidArgument.
BiasSeed ReadSeed(std::span<const uint8_t> in, size_t& offset);

// A contiguous range of a stream: `length` bits starting at `base`. The
// stream is the XOR of lanes [lane, lane + stack); XORing independent lanes
// multiplies their biases and adds their dimensions.
struct Region {
  int lane = 0;
  uint64_t base = 0;
  uint64_t length = 0;
  int stack = 1;
};

// Where each consumer of randomness reads from. Levels get their own lanes
// except under the deterministic scheme, which shares one searched lane.
// Verification hashes of level l >= 1 read from their own stack of
// full-degree lanes placed after the final lane.
class LaneLayout {
 public:
  explicit LaneLayout(const Params& params);

  int lane_count() const { return lane_count_; }
  // Field degree per lane for the configured bias.
  std::vector<int> LaneDegrees() const;

  Region HashRegion(int level) const;
  Region VerifyRegion(int level) const;
  Region ColorRegion(int level) const;
  Region ColorVerifyRegion(int level) const;
  Region FinalRegion() const;

 private:
  uint64_t HashBits() const;
  uint64_t LaneLength(int lane) const;
  int VerifyLaneBase(int level) const;
  Params params_;
  int lane_count_;
};

// Consumes ceil(2m / 8) entropy bytes per lane, in lane order.
BiasSeed SampleSeed(const Params& params, std::span<const uint8_t> entropy);

// Entropy bytes SampleSeed consumes for these parameters.
size_t RequiredEntropyBytes(const Params& params);

// Sequential access to one lane's stream.
class BiasedStream {
 public:
  explicit BiasedStream(const LaneSeed& seed);

  int Bit(uint64_t index) const;
  // `count` rows of `width` bits from stream index `start`; row r occupies
  // words [r * WordsPerRow(width), ...) with bit i of the row at bit i.
  std::vector<uint64_t> Rows(uint64_t start, uint64_t count, int width) const;

  static size_t WordsPerRow(int width) { return (width + 63) / 64; }

 private:
  // `bits` stream bits from `start`, packed 64 per word (plus one spare
  // zero word so readers may straddle the end).
  std::vector<uint64_t> Packed(uint64_t start, uint64_t bits) const;

  LaneSeed seed_;
};

// View of the randomness table R[position, level, bit] plus the auxiliary
// regions, backed by a BiasSeed.
class RandTable {
 public:
  RandTable(const Params& params, BiasSeed seed);

  const Params& params() const { return params_; }
  const BiasSeed& seed() const { return seed_; }
  const LaneLayout& layout() const { return layout_; }

  // Throws kOutOfRange for s >= n_pad, level > L or i >= o.
  int TableBit(uint64_t s, int level, int i) const;

  // Row s holds R[s, level, 0..o-1]; one word per position.
  std::vector<uint64_t> HashRows(int level) const;

  // Rows of `width` bits from a region, `first_row` counted in rows.
  std::vector<uint64_t> RegionRows(const Region& region, uint64_t first_row,
                                   uint64_t count, int width) const;

 private:
  Params params_;
  BiasSeed seed_;
  LaneLayout layout_;
};

// Every (x, y) pair of a lane of degree m exactly once, in Morton order of
// (x, y) so that short prefixes cover small coordinates on both axes.
class SupportEnumerator {
 public:
  explicit SupportEnumerator(int m);

  uint64_t count_log2() const { return 2 * static_cast<uint64_t>(m_); }
  bool Next(LaneSeed& out);
  LaneSeed At(uint64_t index) const;

 private:
  int m_;
  uint64_t next_ = 0;
  bool done_ = false;
};

inline constexpr int kDefaultEnumerationCapBits = 24;

// Enumerator for the full support of `lane`; throws kEnumerationTooWide
// when its seed width exceeds `cap_bits`.
SupportEnumerator EnumerateSupport(const Params& params, int lane,
                                   int cap_bits = kDefaultEnumerationCapBits);

}  // namespace dexch

#endif  // DEXCH_SMALL_BIAS_H_
