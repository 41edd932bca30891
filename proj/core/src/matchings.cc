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

#include "dexch/matchings.h"

#include <algorithm>
#include <cstdlib>

#include "dexch/error.h"

namespace dexch {
namespace {

// Prefix-maximum Fenwick tree over compressed target coordinates; each slot
// remembers which candidate achieved its value.
class MaxFenwick {
 public:
  explicit MaxFenwick(size_t n) : value_(n + 1, 0), who_(n + 1, -1) {}

  void Update(size_t pos, int value, int64_t who) {
    for (size_t i = pos + 1; i < value_.size(); i += i & (~i + 1)) {
      if (value > value_[i]) {
        value_[i] = value;
        who_[i] = who;
      }
    }
  }
  // Best over positions [0, count).
  std::pair<int, int64_t> Query(size_t count) const {
    int best = 0;
    int64_t who = -1;
    for (size_t i = count; i > 0; i -= i & (~i + 1)) {
      if (value_[i] > best) {
        best = value_[i];
        who = who_[i];
      }
    }
    return {best, who};
  }

 private:
  std::vector<int> value_;
  std::vector<int64_t> who_;
};

struct Entry {
  uint64_t block;
  uint64_t target;
};

std::vector<Entry> Flatten(const CandidateSet& c) {
  if (c.targets.size() != c.blocks.size()) {
    throw Error(ErrorCode::kInvalidArgument, "candidate lists misaligned");
  }
  std::vector<Entry> out;
  for (size_t g = 0; g < c.blocks.size(); ++g) {
    if (g > 0 && c.blocks[g] <= c.blocks[g - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "candidate blocks not ascending");
    }
    for (uint64_t t : c.targets[g]) out.push_back({c.blocks[g], t});
  }
  return out;
}

uint64_t AbsDiff(int64_t a, int64_t b) {
  return static_cast<uint64_t>(a > b ? a - b : b - a);
}

}  // namespace

bool Matching::IsMonotone() const {
  for (size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].block <= pairs[i - 1].block) return false;
    if (pairs[i].target < pairs[i - 1].target) return false;
  }
  return true;
}

bool Matching::IsDisjoint() const {
  std::vector<uint64_t> t;
  for (const auto& p : pairs) t.push_back(p.target);
  std::sort(t.begin(), t.end());
  for (size_t i = 1; i < t.size(); ++i) {
    if (t[i] - t[i - 1] < block_len) return false;
  }
  return true;
}

HashDigest WindowHash(std::span<const uint8_t> fp, uint64_t t, uint64_t s,
                      uint64_t block_len, std::span<const uint64_t> rows,
                      int o) {
  if (t + block_len > fp.size()) {
    throw Error(ErrorCode::kOutOfRange, "window past the end of F'");
  }
  return HashBlock(fp.subspan(t, block_len), s, rows, o);
}

CandidateSet FindCandidates(const HashVector& h,
                            std::span<const uint64_t> blocks,
                            std::span<const uint8_t> fp,
                            std::span<const uint64_t> rows,
                            const Params& params,
                            std::optional<uint64_t> band) {
  CandidateSet out;
  const uint64_t b = params.BlockLength(h.level);
  out.block_len = b;
  for (uint64_t j : blocks) {
    if (j >= h.digests.size()) {
      throw Error(ErrorCode::kOutOfRange, "block index out of range");
    }
    out.blocks.push_back(j);
    auto& list = out.targets.emplace_back();
    if (fp.size() < b) continue;
    const uint64_t s = j * b;
    const uint64_t last = fp.size() - b;
    uint64_t lo = 0, hi = last;
    if (band) {
      lo = s > *band ? s - *band : 0;
      hi = std::min(last, s + *band);
    }
    for (uint64_t t = lo; t <= hi; ++t) {
      if (WindowHash(fp, t, s, b, rows, params.o) == h.digests[j]) {
        list.push_back(t);
      }
    }
  }
  return out;
}

Matching MaxMonotoneDisjointMatching(const CandidateSet& candidates,
                                     int level) {
  Matching m;
  m.level = level;
  m.block_len = candidates.block_len;
  const std::vector<Entry> entries = Flatten(candidates);
  if (entries.empty()) return m;

  std::vector<uint64_t> coords;
  for (const auto& e : entries) coords.push_back(e.target);
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  MaxFenwick tree(coords.size());
  std::vector<int> value(entries.size());
  std::vector<int64_t> prev(entries.size(), -1);
  const uint64_t b = candidates.block_len;
  size_t group_start = 0;
  while (group_start < entries.size()) {
    size_t group_end = group_start;
    while (group_end < entries.size() &&
           entries[group_end].block == entries[group_start].block) {
      ++group_end;
    }
    for (size_t e = group_start; e < group_end; ++e) {
      const uint64_t t = entries[e].target;
      size_t count = 0;
      if (t >= b) {
        count = std::upper_bound(coords.begin(), coords.end(), t - b) -
                coords.begin();
      }
      const auto [best, who] = tree.Query(count);
      value[e] = best + 1;
      prev[e] = who;
    }
    for (size_t e = group_start; e < group_end; ++e) {
      const size_t pos = std::lower_bound(coords.begin(), coords.end(),
                                          entries[e].target) -
                         coords.begin();
      tree.Update(pos, value[e], static_cast<int64_t>(e));
    }
    group_start = group_end;
  }

  int64_t best = 0;
  for (size_t e = 1; e < entries.size(); ++e) {
    if (value[e] > value[best]) best = static_cast<int64_t>(e);
  }
  for (int64_t e = best; e >= 0; e = prev[e]) {
    m.pairs.push_back({entries[e].block, entries[e].target});
  }
  std::reverse(m.pairs.begin(), m.pairs.end());
  return m;
}

uint64_t PlausibilityCost(const Matching& m, uint64_t len_f, uint64_t len_fp) {
  const int64_t e = static_cast<int64_t>(len_fp) - static_cast<int64_t>(len_f);
  if (m.pairs.empty()) return AbsDiff(e, 0);
  uint64_t cost = AbsDiff(m.pairs.front().offset(m.block_len), 0);
  for (size_t i = 1; i < m.pairs.size(); ++i) {
    cost += AbsDiff(m.pairs[i].offset(m.block_len),
                    m.pairs[i - 1].offset(m.block_len));
  }
  cost += AbsDiff(e, m.pairs.back().offset(m.block_len));
  return cost;
}

Matching MaxKPlausibleMatching(const CandidateSet& candidates, int level,
                               uint64_t budget, uint64_t len_f,
                               uint64_t len_fp) {
  Matching m;
  m.level = level;
  m.block_len = candidates.block_len;
  const int64_t ext =
      static_cast<int64_t>(len_fp) - static_cast<int64_t>(len_f);
  if (AbsDiff(ext, 0) > budget) return m;

  const uint64_t b = candidates.block_len;
  const int64_t k = static_cast<int64_t>(budget);
  std::vector<Entry> entries;
  for (const Entry& e : Flatten(candidates)) {
    const int64_t d =
        static_cast<int64_t>(e.target) - static_cast<int64_t>(e.block * b);
    if (std::llabs(d) <= k) entries.push_back(e);
  }
  if (entries.empty()) return m;

  const size_t costs = budget + 1;
  const size_t offsets = 2 * budget + 1;
  auto offset_of = [&](size_t e) {
    return static_cast<int64_t>(entries[e].target) -
           static_cast<int64_t>(entries[e].block * b);
  };
  // best[e * costs + c]: longest chain ending at e with accumulated cost c
  // (0 = unreachable); back[] points at the predecessor state.
  std::vector<int> best(entries.size() * costs, 0);
  std::vector<int64_t> back(entries.size() * costs, -1);
  // Predecessors whose block is at least `gap` blocks earlier are disjoint
  // from any later candidate, so they collapse into a per-(offset, cost)
  // maximum.
  const uint64_t gap = 1 + (2 * budget + b - 1) / b;
  std::vector<int> settled(offsets * costs, 0);
  std::vector<int64_t> settled_state(offsets * costs, -1);

  size_t settled_upto = 0;  // entries [0, settled_upto) are settled
  size_t group_start = 0;
  while (group_start < entries.size()) {
    const uint64_t block = entries[group_start].block;
    size_t group_end = group_start;
    while (group_end < entries.size() && entries[group_end].block == block) {
      ++group_end;
    }
    while (settled_upto < group_start &&
           entries[settled_upto].block + gap <= block) {
      const size_t q = settled_upto++;
      const size_t row = static_cast<size_t>(offset_of(q) + k) * costs;
      for (size_t c = 0; c < costs; ++c) {
        if (best[q * costs + c] > settled[row + c]) {
          settled[row + c] = best[q * costs + c];
          settled_state[row + c] = static_cast<int64_t>(q * costs + c);
        }
      }
    }
    for (size_t p = group_start; p < group_end; ++p) {
      const int64_t dp = offset_of(p);
      int* out = &best[p * costs];
      int64_t* out_back = &back[p * costs];
      out[std::llabs(dp)] = 1;
      auto relax = [&](int value, uint64_t cost, int64_t from) {
        if (cost <= budget && value + 1 > out[cost]) {
          out[cost] = value + 1;
          out_back[cost] = from;
        }
      };
      for (int64_t dq = -k; dq <= k; ++dq) {
        const size_t row = static_cast<size_t>(dq + k) * costs;
        const uint64_t step = AbsDiff(dp, dq);
        if (step > budget) continue;
        for (size_t c = 0; c + step < costs; ++c) {
          if (settled[row + c] > 0) {
            relax(settled[row + c], c + step, settled_state[row + c]);
          }
        }
      }
      for (size_t q = settled_upto; q < group_start; ++q) {
        if (entries[q].target + b > entries[p].target) continue;
        const uint64_t step = AbsDiff(dp, offset_of(q));
        if (step > budget) continue;
        for (size_t c = 0; c + step < costs; ++c) {
          if (best[q * costs + c] > 0) {
            relax(best[q * costs + c], c + step,
                  static_cast<int64_t>(q * costs + c));
          }
        }
      }
    }
    group_start = group_end;
  }

  int best_value = 0;
  int64_t best_state = -1;
  for (size_t e = 0; e < entries.size(); ++e) {
    const uint64_t tail = AbsDiff(ext, offset_of(e));
    for (size_t c = 0; c + tail < costs; ++c) {
      if (best[e * costs + c] > best_value) {
        best_value = best[e * costs + c];
        best_state = static_cast<int64_t>(e * costs + c);
      }
    }
  }
  for (int64_t s = best_state; s >= 0; s = back[s]) {
    const size_t e = static_cast<size_t>(s) / costs;
    m.pairs.push_back({entries[e].block, entries[e].target});
  }
  std::reverse(m.pairs.begin(), m.pairs.end());
  return m;
}

std::optional<Matching> DetectKBadSelfMatching(
    std::span<const uint8_t> f_padded, int level, uint64_t k,
    std::span<const uint64_t> rows, const Params& params,
    std::optional<uint64_t> band) {
  const uint64_t b = params.BlockLength(level);
  if (k == 0) return Matching{level, b, {}};
  if (b <= static_cast<uint64_t>(params.o)) return std::nullopt;
  const HashVector h = HashLevel(f_padded, level, rows, params);
  CandidateSet bad;
  bad.block_len = b;
  const uint64_t last = f_padded.size() - b;
  for (uint64_t j = 0; j < h.digests.size(); ++j) {
    const uint64_t s = j * b;
    uint64_t lo = 0, hi = last;
    if (band) {
      lo = s > *band ? s - *band : 0;
      hi = std::min(last, s + *band);
    }
    std::vector<uint64_t> list;
    for (uint64_t t = lo; t <= hi; ++t) {
      if (t == s) continue;
      if (WindowHash(f_padded, t, s, b, rows, params.o) != h.digests[j]) {
        continue;
      }
      if (!std::equal(f_padded.begin() + t, f_padded.begin() + t + b,
                      f_padded.begin() + s)) {
        list.push_back(t);
      }
    }
    if (!list.empty()) {
      bad.blocks.push_back(j);
      bad.targets.push_back(std::move(list));
    }
  }
  Matching m = MaxMonotoneDisjointMatching(bad, level);
  if (m.size() < k) return std::nullopt;
  m.pairs.resize(k);
  return m;
}

}  // namespace dexch
