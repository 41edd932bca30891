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

#ifndef DEXCH_MATCHINGS_H_
#define DEXCH_MATCHINGS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dexch/ip_hash.h"
#include "dexch/params.h"

namespace dexch {

// Block `block` of F (starting at block * block_len) paired with the
// substring of F' starting at `target`. All coordinates are 0-based.
struct MatchPair {
  uint64_t block = 0;
  uint64_t target = 0;

  int64_t offset(uint64_t block_len) const {
    return static_cast<int64_t>(target) -
           static_cast<int64_t>(block * block_len);
  }
  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct Matching {
  int level = 0;
  uint64_t block_len = 1;
  std::vector<MatchPair> pairs;  // ascending block index

  size_t size() const { return pairs.size(); }
  // Strictly increasing blocks and non-decreasing targets.
  bool IsMonotone() const;
  // Targets at least block_len apart.
  bool IsDisjoint() const;
};

// Per-block sorted lists of admissible target starts.
struct CandidateSet {
  uint64_t block_len = 1;
  std::vector<uint64_t> blocks;                  // ascending block indices
  std::vector<std::vector<uint64_t>> targets;    // parallel to `blocks`
};

// Hash of F'[t, t + B) evaluated at the table rows of F position `s`.
HashDigest WindowHash(std::span<const uint8_t> fp, uint64_t t, uint64_t s,
                      uint64_t block_len, std::span<const uint64_t> rows,
                      int o);

// Candidates for the listed blocks of `level`: windows of `fp` whose hash at
// the block's F position equals the block digest. With `band`, only targets
// within `band` of the block's own position are scanned. `rows` are the
// level's hash rows (may be empty when blocks are at most o bits).
CandidateSet FindCandidates(const HashVector& h, std::span<const uint64_t> blocks,
                            std::span<const uint8_t> fp,
                            std::span<const uint64_t> rows, const Params& params,
                            std::optional<uint64_t> band);

// Maximum-cardinality monotone disjoint matching using one candidate per
// matched block. Exact; O(C log C) for C candidates.
Matching MaxMonotoneDisjointMatching(const CandidateSet& candidates, int level);

// |i_1 - i'_1| + |(lenF - i_last) - (lenFp - i'_last)| + sum of offset
// changes between consecutive pairs. Empty matchings cost |lenF - lenFp|.
uint64_t PlausibilityCost(const Matching& m, uint64_t len_f, uint64_t len_fp);

// Maximum-cardinality monotone disjoint matching with plausibility cost at
// most `budget`. Candidates farther than `budget` from their block's own
// position can never participate and are ignored. Returns an empty matching
// when even the empty one exceeds the budget.
Matching MaxKPlausibleMatching(const CandidateSet& candidates, int level,
                               uint64_t budget, uint64_t len_f,
                               uint64_t len_fp);

// Searches for a size-`k` monotone disjoint matching of level blocks of
// `f_padded` into `f_padded` itself whose pairs have equal hashes but
// different strings. With `band`, targets are limited to within `band` of
// the block position. Returns the witness when one exists.
std::optional<Matching> DetectKBadSelfMatching(std::span<const uint8_t> f_padded,
                                               int level, uint64_t k,
                                               std::span<const uint64_t> rows,
                                               const Params& params,
                                               std::optional<uint64_t> band);

}  // namespace dexch

#endif  // DEXCH_MATCHINGS_H_
