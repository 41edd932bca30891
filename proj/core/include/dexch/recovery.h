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

#ifndef DEXCH_RECOVERY_H_
#define DEXCH_RECOVERY_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dexch/bits.h"
#include "dexch/ip_hash.h"
#include "dexch/matchings.h"
#include "dexch/summary.h"

namespace dexch {

// Next-level digests predicted from a matching; `known[j]` is false where no
// match covers block j (those digests hold the all-ones sentinel).
struct GuessVector {
  int level = 0;
  std::vector<HashDigest> digests;
  std::vector<uint8_t> known;
};

// Children 2j and 2j+1 of every matched block j take the hashes of the two
// halves of its F' window, evaluated at the children's F positions.
// `next_rows` are the table rows of level + 1.
GuessVector GuessNextLevel(const Matching& m, std::span<const uint8_t> fp_padded,
                           std::span<const uint64_t> next_rows,
                           const Params& params);

struct Alg1Trace {
  std::vector<uint64_t> matching_sizes;  // level 0 .. L-1
  std::vector<uint64_t> guess_errors;    // levels 1 .. L: wrong or unknown
};

// Level-by-level Reed-Solomon recovery for the Alg1Random and Deterministic
// schemes. Throws kDecodeFailure or kFinalCheckMismatch.
BitString RecoverAlg1(const Summary& s, std::span<const uint8_t> fp,
                      Alg1Trace* trace = nullptr);

// Still-consistent matches organised as binary trees across levels. Level l
// has base_blocks * 2^l nodes; a live node (l, j) belongs to the tree of its
// parent (l - 1, j / 2) when that parent is live and is a root otherwise.
// Leaves are the live nodes of the current level.
class MatchForest {
 public:
  explicit MatchForest(uint64_t base_blocks);

  int current_level() const { return static_cast<int>(alive_.size()) - 1; }
  uint64_t BlockCount(int level) const { return base_blocks_ << level; }

  bool IsLeaf(uint64_t j) const { return alive_.back()[j] != 0; }
  uint64_t Target(uint64_t j) const { return targets_[j]; }
  std::vector<uint64_t> Leaves() const;

  // A fresh match at the current level (a new tree of depth 0).
  void AddRoot(uint64_t j, uint64_t target);
  // Declares leaf j inconsistent: removes it and its path to the root.
  void Kill(uint64_t j);
  // Moves to the next level; each leaf (j -> t) gets children
  // (2j -> t) and (2j + 1 -> t + half).
  void Split(uint64_t half);

  bool IsAlive(int level, uint64_t j) const { return alive_[level][j] != 0; }
  bool IsRoot(int level, uint64_t j) const;
  // Roots at level current - depth, ascending block index.
  std::vector<uint64_t> Roots(int depth) const;

 private:
  friend class WitnessDecoder;
  uint64_t base_blocks_;
  std::vector<std::vector<uint8_t>> alive_;
  std::vector<uint64_t> targets_;
};

// b_i extra counts and index sets B_i (1-based), indexed by depth i.
struct Witness {
  std::vector<uint64_t> b;
  std::vector<std::vector<uint64_t>> sets;

  uint64_t size() const;
  uint64_t cost() const;  // sum of i * b_i
};

struct WitnessOptions {
  int t = 0;
  uint64_t max_witnesses = 1'000'000;
  // Skip witnesses whose decoded leaf set was already produced.
  bool dedupe = true;
  // Only leaves passing the filter may be selected.
  std::function<bool(uint64_t)> leaf_filter;
};

// Visits t-witnesses for the forest's current level in order of decoded
// size, then cost, then lexicographically, each with the leaves it decodes
// to. A witness selects, for depth i from deepest to shallowest and j in
// B_i ascending, leaf ((j - 1) mod 2^i) of the ceil(j / 2^i)-th depth-i
// tree, then cuts that leaf's root path so its live siblings become smaller
// trees. Stops when `visit` returns true. Returns the number visited.
uint64_t EnumerateTWitnesses(
    const MatchForest& forest, const WitnessOptions& options,
    const std::function<bool(const Witness&, std::span<const uint64_t>)>&
        visit);

struct RecoveryLimits {
  uint64_t max_witnesses = 1'000'000;
  std::optional<int> t;  // default 6k
};

struct RepairResult {
  std::vector<HashDigest> digests;
  uint64_t witnesses_tried = 0;
  std::vector<uint64_t> witness_leaves;
};

// Finds the digests consistent with `payload`: unknown positions plus the
// leaves of a witness are solved for over GF(2) (only the low `unknown_bits`
// bits of each can be nonzero); the first witness giving a unique
// consistent solution wins. Throws kWitnessSearchExhausted.
RepairResult RepairLevel(const GuessVector& guess, const MatchForest& forest,
                         const Words& payload, const DigestStringHasher& hasher,
                         int unknown_bits, const RecoveryLimits& limits, int t);

// Same per color class against the class payloads, with budget t_color;
// the combined result must also match the level payload.
RepairResult RepairLevelColored(const GuessVector& guess,
                                const MatchForest& forest,
                                std::span<const Words> class_payloads,
                                std::span<const int> colors,
                                const DigestStringHasher& class_hasher,
                                const Words& payload,
                                const DigestStringHasher& hasher,
                                int unknown_bits, const RecoveryLimits& limits,
                                int t_color);

struct Alg2LevelTrace {
  int level = 0;
  uint64_t pruned = 0;
  uint64_t new_matches = 0;
  uint64_t unknown = 0;
  uint64_t guess_errors = 0;
  uint64_t witnesses_tried = 0;
  uint64_t witness_leaves = 0;
  std::vector<uint64_t> trees_per_depth;
};

struct Alg2Trace {
  std::vector<Alg2LevelTrace> levels;
};

// Recovery for the Alg2Optimal scheme. Throws kWitnessSearchExhausted or
// kFinalCheckMismatch.
BitString RecoverAlg2(const Summary& s, std::span<const uint8_t> fp,
                      const RecoveryLimits& limits = {},
                      Alg2Trace* trace = nullptr);

// Dispatches on the summary's scheme.
BitString Recover(const Summary& s, std::span<const uint8_t> fp,
                  const RecoveryLimits& limits = {});

}  // namespace dexch

#endif  // DEXCH_RECOVERY_H_
