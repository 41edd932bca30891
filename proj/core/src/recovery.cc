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

#include "dexch/recovery.h"

#include <algorithm>
#include <set>
#include <string>

#include "dexch/error.h"
#include "dexch/gf2.h"

namespace dexch {
namespace {

std::vector<uint64_t> RowsFor(const RandTable& table, int level) {
  const Params& p = table.params();
  if (p.BlockLength(level) <= static_cast<uint64_t>(p.o)) return {};
  return table.HashRows(level);
}

// F' extended by the same zero padding that took F to n_pad bits.
BitString PadReceived(std::span<const uint8_t> fp, const Params& p) {
  BitString out(fp.begin(), fp.end());
  out.resize(fp.size() + (p.n_pad - p.n), 0);
  return out;
}

BitString FinishFromDigests(std::span<const HashDigest> digests,
                            const RandTable& table, uint64_t final_check) {
  const Params& p = table.params();
  BitString f_pad(p.n_pad);
  for (uint64_t j = 0; j < p.n_pad; ++j) f_pad[j] = digests[j] & 1;
  if (FinalCheckHash(f_pad, table) != final_check) {
    throw Error(ErrorCode::kFinalCheckMismatch,
                "reconstruction does not match the final check");
  }
  f_pad.resize(p.n);
  return f_pad;
}

}  // namespace

GuessVector GuessNextLevel(const Matching& m, std::span<const uint8_t> fp_padded,
                           std::span<const uint64_t> next_rows,
                           const Params& params) {
  const int next = m.level + 1;
  if (next > params.levels) {
    throw Error(ErrorCode::kOutOfRange, "no level below the finest");
  }
  GuessVector g;
  g.level = next;
  const uint64_t count = params.BlockCount(next);
  const uint64_t half = params.BlockLength(next);
  g.digests.assign(count, LowMask(params.o));
  g.known.assign(count, 0);
  for (const MatchPair& pair : m.pairs) {
    for (uint64_t c = 0; c < 2; ++c) {
      const uint64_t child = 2 * pair.block + c;
      g.digests[child] = WindowHash(fp_padded, pair.target + c * half,
                                    child * half, half, next_rows, params.o);
      g.known[child] = 1;
    }
  }
  return g;
}

BitString RecoverAlg1(const Summary& s, std::span<const uint8_t> fp,
                      Alg1Trace* trace) {
  const Params& p = s.params;
  if (!p.uses_rs()) {
    throw Error(ErrorCode::kInvalidArgument,
                "summary scheme has no Reed-Solomon layers");
  }
  const RandTable table(p, s.seed);
  const BitString fpp = PadReceived(fp, p);
  HashVector h = s.level0;
  std::vector<uint64_t> rows = RowsFor(table, 0);
  for (int level = 0; level < p.levels; ++level) {
    std::vector<uint64_t> blocks(p.BlockCount(level));
    for (uint64_t j = 0; j < blocks.size(); ++j) blocks[j] = j;
    const CandidateSet cs =
        FindCandidates(h, blocks, fpp, rows, p, uint64_t{p.k});
    const Matching m = MaxMonotoneDisjointMatching(cs, level);
    std::vector<uint64_t> next_rows = RowsFor(table, level + 1);
    const GuessVector guess = GuessNextLevel(m, fpp, next_rows, p);

    const RsCode code = LevelCode(p, level + 1);
    const auto decoded =
        code.Decode(PackDigests(guess.digests, p), s.rs_parity[level]);
    HashVector next;
    next.level = level + 1;
    next.width = p.o;
    next.digests = UnpackDigests(decoded, p.BlockCount(level + 1), p);
    if (trace) {
      trace->matching_sizes.push_back(m.size());
      uint64_t errors = 0;
      for (size_t j = 0; j < next.digests.size(); ++j) {
        errors += !guess.known[j] || guess.digests[j] != next.digests[j];
      }
      trace->guess_errors.push_back(errors);
    }
    h = std::move(next);
    rows = std::move(next_rows);
  }
  return FinishFromDigests(h.digests, table, s.final_check);
}

// ---------------------------------------------------------------------------
// Forest of still-consistent matches.

MatchForest::MatchForest(uint64_t base_blocks) : base_blocks_(base_blocks) {
  alive_.emplace_back(base_blocks, 0);
  targets_.assign(base_blocks, 0);
}

std::vector<uint64_t> MatchForest::Leaves() const {
  std::vector<uint64_t> out;
  const auto& cur = alive_.back();
  for (uint64_t j = 0; j < cur.size(); ++j) {
    if (cur[j]) out.push_back(j);
  }
  return out;
}

void MatchForest::AddRoot(uint64_t j, uint64_t target) {
  auto& cur = alive_.back();
  if (j >= cur.size()) throw Error(ErrorCode::kOutOfRange, "block out of range");
  if (cur[j]) throw Error(ErrorCode::kInvalidArgument, "block already matched");
  const int level = current_level();
  if (level > 0 && alive_[level - 1][j >> 1]) {
    throw Error(ErrorCode::kInvalidArgument, "block already has a live parent");
  }
  cur[j] = 1;
  targets_[j] = target;
}

void MatchForest::Kill(uint64_t j) {
  int level = current_level();
  if (j >= alive_[level].size() || !alive_[level][j]) {
    throw Error(ErrorCode::kInvalidArgument, "not a live leaf");
  }
  alive_[level][j] = 0;
  while (level > 0 && alive_[level - 1][j >> 1]) {
    j >>= 1;
    --level;
    alive_[level][j] = 0;
  }
}

void MatchForest::Split(uint64_t half) {
  const auto& cur = alive_.back();
  std::vector<uint8_t> next(2 * cur.size(), 0);
  std::vector<uint64_t> next_targets(2 * cur.size(), 0);
  for (uint64_t j = 0; j < cur.size(); ++j) {
    if (!cur[j]) continue;
    next[2 * j] = next[2 * j + 1] = 1;
    next_targets[2 * j] = targets_[j];
    next_targets[2 * j + 1] = targets_[j] + half;
  }
  alive_.push_back(std::move(next));
  targets_ = std::move(next_targets);
}

bool MatchForest::IsRoot(int level, uint64_t j) const {
  return alive_[level][j] && (level == 0 || !alive_[level - 1][j >> 1]);
}

std::vector<uint64_t> MatchForest::Roots(int depth) const {
  std::vector<uint64_t> out;
  const int level = current_level() - depth;
  if (level < 0) return out;
  for (uint64_t j = 0; j < alive_[level].size(); ++j) {
    if (IsRoot(level, j)) out.push_back(j);
  }
  return out;
}

uint64_t Witness::size() const {
  uint64_t total = 0;
  for (const auto& set : sets) total += set.size();
  return total;
}

uint64_t Witness::cost() const {
  uint64_t total = 0;
  for (size_t i = 0; i < b.size(); ++i) total += i * b[i];
  return total;
}

// ---------------------------------------------------------------------------
// Witness decoding with undoable cuts.

class WitnessDecoder {
 public:
  WitnessDecoder(const MatchForest& forest, int max_depth)
      : alive_(forest.alive_),
        cur_(forest.current_level()),
        roots_(max_depth + 1) {
    for (int d = 0; d <= max_depth; ++d) roots_[d] = forest.Roots(d);
  }

  int current_level() const { return cur_; }
  bool LeafAlive(uint64_t j) const {
    return j < alive_[cur_].size() && alive_[cur_][j];
  }
  const std::vector<uint64_t>& Roots(int depth) const { return roots_[depth]; }

  size_t Mark() const { return log_.size(); }

  // Removes leaf j and its path to its current root; live siblings along
  // the path become roots of smaller trees.
  void Cut(uint64_t j) {
    int level = cur_;
    Kill(level, j);
    while (level > 0 && alive_[level - 1][j >> 1]) {
      const uint64_t sibling = j ^ 1;
      if (alive_[level][sibling]) AddRootAt(cur_ - level, sibling);
      j >>= 1;
      --level;
      Kill(level, j);
    }
    RemoveRootAt(cur_ - level, j);
  }

  void Undo(size_t mark) {
    while (log_.size() > mark) {
      const Change c = log_.back();
      log_.pop_back();
      switch (c.kind) {
        case Change::kKill:
          alive_[c.a][c.j] = 1;
          break;
        case Change::kAddRoot: {
          auto& list = roots_[c.a];
          list.erase(std::lower_bound(list.begin(), list.end(), c.j));
          break;
        }
        case Change::kRemoveRoot: {
          auto& list = roots_[c.a];
          list.insert(std::lower_bound(list.begin(), list.end(), c.j), c.j);
          break;
        }
      }
    }
  }

 private:
  struct Change {
    enum Kind : uint8_t { kKill, kAddRoot, kRemoveRoot } kind;
    int a;  // level for kills, depth for root changes
    uint64_t j;
  };

  void Kill(int level, uint64_t j) {
    alive_[level][j] = 0;
    log_.push_back({Change::kKill, level, j});
  }
  void AddRootAt(int depth, uint64_t j) {
    if (depth >= static_cast<int>(roots_.size())) return;
    auto& list = roots_[depth];
    list.insert(std::lower_bound(list.begin(), list.end(), j), j);
    log_.push_back({Change::kAddRoot, depth, j});
  }
  void RemoveRootAt(int depth, uint64_t j) {
    if (depth >= static_cast<int>(roots_.size())) return;
    auto& list = roots_[depth];
    auto it = std::lower_bound(list.begin(), list.end(), j);
    if (it == list.end() || *it != j) return;
    list.erase(it);
    log_.push_back({Change::kRemoveRoot, depth, j});
  }

  std::vector<std::vector<uint8_t>> alive_;
  int cur_;
  std::vector<std::vector<uint64_t>> roots_;
  std::vector<Change> log_;
};

namespace {

using WitnessVisitor =
    std::function<bool(const Witness&, std::span<const uint64_t>)>;

// Depth-first generation of the witnesses with one exact (size, cost).
// Depths are processed deepest first; at each depth the tree list is fixed
// when the depth starts, so later indices keep addressing a tree whose path
// was cut by an earlier index (its remaining leaves stay selectable).
class WitnessSearch {
 public:
  WitnessSearch(WitnessDecoder& decoder, const WitnessOptions& options,
                int max_depth, const WitnessVisitor& visit)
      : dec_(decoder), opt_(options), max_depth_(max_depth), visit_(visit) {
    witness_.b.assign(max_depth + 1, 0);
    witness_.sets.assign(max_depth + 1, {});
  }

  // Returns the number of formal witnesses with this size and cost.
  uint64_t Run(uint64_t size, uint64_t cost) {
    size_ = size;
    cost_ = cost;
    formal_ = 0;
    Depth(max_depth_, size, 0);
    return formal_;
  }

  void ResetSeen() { seen_.clear(); }
  bool stopped() const { return stopped_; }
  uint64_t visited() const { return visited_; }

 private:
  uint64_t Free(int depth) const {
    return static_cast<uint64_t>(opt_.t) >> depth;
  }

  void Depth(int depth, uint64_t size_left, uint64_t cost_used) {
    if (stopped_) return;
    if (depth < 0) {
      if (size_left == 0 && cost_used == cost_) Emit();
      return;
    }
    // Selections beyond the free allowance cost `depth` each.
    const bool selectable =
        size_left > 0 &&
        (Free(depth) > 0 || cost_used + depth <= cost_);
    if (!selectable) {
      Depth(depth - 1, size_left, cost_used);
      return;
    }
    std::vector<uint64_t> snapshot = dec_.Roots(depth);
    if (snapshot.size() > static_cast<size_t>(opt_.t)) {
      snapshot.resize(opt_.t);
    }
    Pick(depth, snapshot, 1, size_left, cost_used);
  }

  void Pick(int depth, const std::vector<uint64_t>& snapshot, uint64_t from_j,
            uint64_t size_left, uint64_t cost_used) {
    const uint64_t count = witness_.sets[depth].size();
    const uint64_t extra = count > Free(depth) ? count - Free(depth) : 0;
    if (cost_used + depth * extra <= cost_) {
      witness_.b[depth] = extra;
      Depth(depth - 1, size_left, cost_used + depth * extra);
      witness_.b[depth] = 0;
    }
    if (stopped_ || size_left == 0) return;
    const uint64_t next_extra = count + 1 > Free(depth) ? count + 1 - Free(depth) : 0;
    if (cost_used + depth * next_extra > cost_) return;

    const uint64_t span = uint64_t{1} << depth;
    const uint64_t limit = snapshot.size() * span;
    for (uint64_t j = from_j; j <= limit && !stopped_; ++j) {
      const uint64_t leaf = (snapshot[(j - 1) >> depth] << depth) | ((j - 1) & (span - 1));
      if (!dec_.LeafAlive(leaf)) continue;
      if (opt_.leaf_filter && !opt_.leaf_filter(leaf)) continue;
      const size_t mark = dec_.Mark();
      dec_.Cut(leaf);
      leaves_.push_back(leaf);
      witness_.sets[depth].push_back(j);
      Pick(depth, snapshot, j + 1, size_left - 1, cost_used);
      witness_.sets[depth].pop_back();
      leaves_.pop_back();
      dec_.Undo(mark);
    }
  }

  void Emit() {
    ++formal_;
    if (opt_.dedupe) {
      std::vector<uint64_t> key = leaves_;
      std::sort(key.begin(), key.end());
      if (!seen_.insert(std::move(key)).second) return;
    }
    ++visited_;
    if (visit_(witness_, leaves_) || visited_ >= opt_.max_witnesses) {
      stopped_ = true;
    }
  }

  WitnessDecoder& dec_;
  const WitnessOptions& opt_;
  int max_depth_;
  const WitnessVisitor& visit_;
  Witness witness_;
  std::vector<uint64_t> leaves_;
  std::set<std::vector<uint64_t>> seen_;
  uint64_t size_ = 0;
  uint64_t cost_ = 0;
  uint64_t formal_ = 0;
  uint64_t visited_ = 0;
  bool stopped_ = false;
};

}  // namespace

uint64_t EnumerateTWitnesses(const MatchForest& forest,
                             const WitnessOptions& options,
                             const WitnessVisitor& visit) {
  if (options.t < 0) {
    throw Error(ErrorCode::kInvalidArgument, "witness budget must be >= 0");
  }
  const int max_depth = std::min(forest.current_level(), options.t - 1);
  WitnessDecoder decoder(forest, std::max(max_depth, 0));
  WitnessSearch search(decoder, options, max_depth, visit);
  const uint64_t t = static_cast<uint64_t>(options.t);
  uint64_t max_size = t;  // paid selections
  for (int i = 0; i <= max_depth; ++i) max_size += t >> i;
  for (uint64_t size = 0; size <= max_size && !search.stopped(); ++size) {
    search.ResetSeen();
    uint64_t formal = 0;
    for (uint64_t cost = 0; cost <= t && !search.stopped(); ++cost) {
      formal += search.Run(size, cost);
    }
    // Dropping the last selection of a witness leaves a witness, so once a
    // size has none, no larger size has any either.
    if (formal == 0) break;
  }
  return search.visited();
}

// ---------------------------------------------------------------------------
// Repair.

namespace {

// Linear system for one hashed digest string: unknown digest bits map to
// hash-output columns.
class DigestSystem {
 public:
  DigestSystem(const DigestStringHasher& hasher, uint64_t input_bits, int o,
               int unknown_bits)
      : hasher_(hasher), input_bits_(input_bits), o_(o), u_(unknown_bits) {}

  Words Column(uint64_t local_digest, uint64_t global_digest, int bit) const {
    Words acc(hasher_.words(), 0);
    hasher_.AddContribution(acc, input_bits_, local_digest * o_ + bit,
                            global_digest * o_ + bit);
    return acc;
  }

  // Removes a known digest's contribution from `rhs` (i.e. zeroes it).
  void Unset(Words& rhs, uint64_t local_digest, uint64_t global_digest,
             HashDigest value) const {
    for (int b = 0; b < o_; ++b) {
      if ((value >> b) & 1) {
        hasher_.AddContribution(rhs, input_bits_, local_digest * o_ + b,
                                global_digest * o_ + b);
      }
    }
  }

  // Appends columns for the low bits of a digest; false when dependent.
  bool AddUnknown(Gf2Eliminator& e, uint64_t local_digest,
                  uint64_t global_digest) const {
    for (int b = 0; b < u_; ++b) {
      if (!e.AddColumn(Column(local_digest, global_digest, b))) return false;
    }
    return true;
  }

  int unknown_bits() const { return u_; }

 private:
  const DigestStringHasher& hasher_;
  uint64_t input_bits_;
  int o_;
  int u_;
};

Words XorWords(const Words& a, const Words& b) {
  Words out = a;
  out.resize(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < b.size(); ++i) out[i] ^= b[i];
  return out;
}

void Assign(std::vector<HashDigest>& digests, std::span<const uint64_t> order,
            const std::vector<uint8_t>& x, int u) {
  for (size_t idx = 0; idx < order.size(); ++idx) {
    HashDigest d = 0;
    for (int b = 0; b < u; ++b) d |= HashDigest{x[idx * u + b]} << b;
    digests[order[idx]] = d;
  }
}

// Solves one class (or the whole level when `positions` lists every block).
// `local_of` maps a block to its index among the hashed positions.
RepairResult SolveClass(const GuessVector& guess, const MatchForest& forest,
                        std::span<const uint64_t> positions,
                        const Words& payload, const DigestStringHasher& hasher,
                        bool subset, int o, int unknown_bits,
                        const RecoveryLimits& limits, int t,
                        std::function<bool(uint64_t)> filter) {
  std::vector<uint64_t> local_of_storage;
  auto local_of = [&](uint64_t p) -> uint64_t {
    return subset ? local_of_storage[p] : p;
  };
  if (subset) {
    local_of_storage.assign(guess.digests.size(), 0);
    for (size_t i = 0; i < positions.size(); ++i) {
      local_of_storage[positions[i]] = i;
    }
  }
  const DigestSystem sys(hasher, positions.size() * static_cast<uint64_t>(o),
                         o, unknown_bits);

  std::vector<HashDigest> known_part(guess.digests.size(), 0);
  std::vector<uint64_t> unknown;
  for (uint64_t p : positions) {
    if (guess.known[p]) {
      known_part[p] = guess.digests[p];
    } else {
      unknown.push_back(p);
    }
  }
  const Words base_hash =
      subset ? hasher.HashSubset(known_part, positions) : hasher.Hash(known_part);
  const Words base_rhs = XorWords(payload, base_hash);

  Gf2Eliminator base(static_cast<size_t>(hasher.width()));
  bool base_ok = true;
  for (uint64_t p : unknown) {
    base_ok = base_ok && sys.AddUnknown(base, local_of(p), p);
  }
  if (!base_ok) {
    throw Error(ErrorCode::kWitnessSearchExhausted,
                std::to_string(unknown.size()) +
                    " unmatched digests exceed the verification width");
  }

  RepairResult result;
  bool found = false;
  WitnessOptions options;
  options.t = t;
  options.max_witnesses = limits.max_witnesses;
  options.leaf_filter = std::move(filter);
  result.witnesses_tried = EnumerateTWitnesses(
      forest, options,
      [&](const Witness&, std::span<const uint64_t> leaves) {
        Gf2Eliminator e = base;
        Words rhs = base_rhs;
        for (uint64_t p : leaves) {
          sys.Unset(rhs, local_of(p), p, guess.digests[p]);
          if (!sys.AddUnknown(e, local_of(p), p)) return false;
        }
        const auto x = e.Solve(rhs);
        if (!x) return false;
        std::vector<uint64_t> order = unknown;
        order.insert(order.end(), leaves.begin(), leaves.end());
        result.digests.assign(guess.digests.begin(), guess.digests.end());
        for (uint64_t p : unknown) result.digests[p] = 0;
        Assign(result.digests, order, *x, unknown_bits);
        result.witness_leaves.assign(leaves.begin(), leaves.end());
        found = true;
        return true;
      });
  if (!found) {
    throw Error(ErrorCode::kWitnessSearchExhausted,
                "no witness among " + std::to_string(result.witnesses_tried) +
                    " explains the verification hash");
  }
  return result;
}

}  // namespace

RepairResult RepairLevel(const GuessVector& guess, const MatchForest& forest,
                         const Words& payload, const DigestStringHasher& hasher,
                         int unknown_bits, const RecoveryLimits& limits,
                         int t) {
  const uint64_t count = guess.digests.size();
  if (guess.known.size() != count ||
      forest.BlockCount(forest.current_level()) != count) {
    throw Error(ErrorCode::kLengthMismatch, "guess and forest disagree");
  }
  std::vector<uint64_t> all(count);
  for (uint64_t j = 0; j < count; ++j) all[j] = j;
  return SolveClass(guess, forest, all, payload, hasher, /*subset=*/false,
                    hasher.digest_width(), unknown_bits, limits, t, {});
}

RepairResult RepairLevelColored(const GuessVector& guess,
                                const MatchForest& forest,
                                std::span<const Words> class_payloads,
                                std::span<const int> colors,
                                const DigestStringHasher& class_hasher,
                                const Words& payload,
                                const DigestStringHasher& hasher,
                                int unknown_bits, const RecoveryLimits& limits,
                                int t_color) {
  const uint64_t count = guess.digests.size();
  if (colors.size() != count || guess.known.size() != count) {
    throw Error(ErrorCode::kLengthMismatch, "colors and guess disagree");
  }
  RepairResult out;
  out.digests.assign(guess.digests.begin(), guess.digests.end());
  std::string failures;
  for (size_t c = 0; c < class_payloads.size(); ++c) {
    std::vector<uint64_t> positions;
    for (uint64_t j = 0; j < count; ++j) {
      if (colors[j] == static_cast<int>(c)) positions.push_back(j);
    }
    try {
      const RepairResult r = SolveClass(
          guess, forest, positions, class_payloads[c], class_hasher,
          /*subset=*/true, class_hasher.digest_width(), unknown_bits, limits,
          t_color,
          [&colors, c](uint64_t leaf) {
            return colors[leaf] == static_cast<int>(c);
          });
      for (uint64_t p : positions) out.digests[p] = r.digests[p];
      out.witnesses_tried += r.witnesses_tried;
      out.witness_leaves.insert(out.witness_leaves.end(),
                                r.witness_leaves.begin(),
                                r.witness_leaves.end());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kWitnessSearchExhausted) throw;
      failures += (failures.empty() ? "" : ", ") + std::to_string(c);
    }
  }
  if (!failures.empty()) {
    throw Error(ErrorCode::kWitnessSearchExhausted,
                "color classes without a verified repair: " + failures);
  }
  if (hasher.Hash(out.digests) != payload) {
    throw Error(ErrorCode::kWitnessSearchExhausted,
                "class repairs disagree with the level verification hash");
  }
  std::sort(out.witness_leaves.begin(), out.witness_leaves.end());
  return out;
}

BitString RecoverAlg2(const Summary& s, std::span<const uint8_t> fp,
                      const RecoveryLimits& limits, Alg2Trace* trace) {
  const Params& p = s.params;
  if (p.scheme != Scheme::kAlg2Optimal) {
    throw Error(ErrorCode::kInvalidArgument,
                "summary scheme is not the verification-hash scheme");
  }
  const RandTable table(p, s.seed);
  const BitString fpp = PadReceived(fp, p);
  const int t = limits.t.value_or(6 * static_cast<int>(p.k));
  const int t_color = p.log_n;

  HashVector h = s.level0;
  MatchForest forest(p.BlockCount(0));
  std::vector<HashDigest> previous_guess;  // guessed digests of the leaves
  std::vector<uint64_t> rows = RowsFor(table, 0);
  for (int level = 0; level < p.levels; ++level) {
    Alg2LevelTrace lt;
    lt.level = level + 1;
    const uint64_t block = p.BlockLength(level);

    // Leaves whose guess turned out wrong are inconsistent matches.
    for (uint64_t j : forest.Leaves()) {
      if (previous_guess[j] != h.digests[j]) {
        forest.Kill(j);
        ++lt.pruned;
      }
    }

    std::vector<uint64_t> unmatched;
    for (uint64_t j = 0; j < p.BlockCount(level); ++j) {
      if (!forest.IsLeaf(j) && !(level > 0 && forest.IsAlive(level - 1, j >> 1))) {
        unmatched.push_back(j);
      }
    }
    const CandidateSet cs =
        FindCandidates(h, unmatched, fpp, rows, p, uint64_t{p.k});
    const Matching delta =
        MaxKPlausibleMatching(cs, level, p.k, p.n_pad, fpp.size());
    for (const MatchPair& pair : delta.pairs) {
      forest.AddRoot(pair.block, pair.target);
    }
    lt.new_matches = delta.size();
    forest.Split(block / 2);

    const int next = level + 1;
    const uint64_t half = p.BlockLength(next);
    std::vector<uint64_t> next_rows = RowsFor(table, next);
    GuessVector guess;
    guess.level = next;
    guess.digests.assign(p.BlockCount(next), 0);
    guess.known.assign(p.BlockCount(next), 0);
    for (uint64_t j : forest.Leaves()) {
      guess.digests[j] =
          WindowHash(fpp, forest.Target(j), j * half, half, next_rows, p.o);
      guess.known[j] = 1;
    }
    for (uint8_t k : guess.known) lt.unknown += !k;
    if (trace) {
      for (int d = 0; d <= forest.current_level(); ++d) {
        lt.trees_per_depth.push_back(forest.Roots(d).size());
      }
    }

    const int u = static_cast<int>(std::min<uint64_t>(p.o, half));
    const DigestStringHasher hasher(table, table.layout().VerifyRegion(next),
                                    p.BlockCount(next), p.o, p.verify_width);
    RepairResult r;
    if (p.uses_colors()) {
      const auto colors = ColorAssignment(table, next);
      const DigestStringHasher class_hasher(
          table, table.layout().ColorVerifyRegion(next), p.BlockCount(next),
          p.o, p.color_verify_width);
      r = RepairLevelColored(guess, forest, s.color_verify[level], colors,
                             class_hasher, s.verify[level], hasher, u, limits,
                             t_color);
    } else {
      r = RepairLevel(guess, forest, s.verify[level], hasher, u, limits, t);
    }
    for (uint64_t j = 0; j < r.digests.size(); ++j) {
      lt.guess_errors += !guess.known[j] || guess.digests[j] != r.digests[j];
    }
    lt.witnesses_tried = r.witnesses_tried;
    lt.witness_leaves = r.witness_leaves.size();
    if (trace) trace->levels.push_back(std::move(lt));

    previous_guess = std::move(guess.digests);
    h.level = next;
    h.digests = std::move(r.digests);
    rows = std::move(next_rows);
  }
  return FinishFromDigests(h.digests, table, s.final_check);
}

BitString Recover(const Summary& s, std::span<const uint8_t> fp,
                  const RecoveryLimits& limits) {
  if (s.params.uses_rs()) return RecoverAlg1(s, fp);
  return RecoverAlg2(s, fp, limits);
}

}  // namespace dexch
