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

// Acceptance run: one PASS/FAIL line per criterion at the pinned sizes and
// tolerances. Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dexch/error.h"
#include "dexch/harness.h"
#include "dexch/insdel_code.h"
#include "dexch/ip_hash.h"
#include "dexch/matchings.h"
#include "dexch/recovery.h"
#include "dexch/reed_solomon.h"
#include "dexch/small_bias.h"
#include "dexch/summary.h"
#include "oracles.h"

namespace dexch {
namespace {

using Clock = std::chrono::steady_clock;

class Report {
 public:
  void Line(int id, bool ok, const std::string& detail, Clock::time_point start) {
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s criterion %d: %s [%.1fs]\n", ok ? "PASS" : "FAIL", id,
                detail.c_str(), secs);
    std::fflush(stdout);
    failed_ += ok ? 0 : 1;
  }
  int failed() const { return failed_; }

 private:
  int failed_ = 0;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::vector<uint8_t> Entropy(size_t n, std::mt19937_64& rng) {
  std::vector<uint8_t> out(n);
  for (auto& b : out) b = static_cast<uint8_t>(rng());
  return out;
}

uint64_t TrialSeed(uint64_t a, uint64_t b, uint64_t c) {
  std::seed_seq seq{a, b, c};
  std::mt19937_64 rng(seq);
  return rng();
}

struct FitPoint {
  uint64_t n;
  uint32_t k;
  Scheme scheme;
  uint64_t bits;
};

double Spread(const std::vector<FitPoint>& pts, double* lo, double* hi) {
  *lo = 1e300;
  *hi = 0;
  for (const FitPoint& p : pts) {
    const double c = p.bits / TheoreticalScaling(p.n, p.k, p.scheme);
    *lo = std::min(*lo, c);
    *hi = std::max(*hi, c);
  }
  return *hi / *lo;
}

// ---------------------------------------------------------------------------
// Criteria 1, 3 (deterministic part) and 6.

struct DeterministicGridResult {
  uint64_t trials = 0;
  uint64_t exact = 0;
  uint64_t bound_checks = 0;
  uint64_t bound_violations = 0;
  uint64_t max_seed_index = 0;
  bool seed_cap_hit = false;
  std::vector<FitPoint> sizes;
  std::string first_failure;
};

DeterministicGridResult RunDeterministicGrid() {
  DeterministicGridResult r;
  for (uint64_t n : {uint64_t{1} << 10, uint64_t{1} << 12, uint64_t{1} << 14}) {
    for (uint32_t k : {2u, 4u, 8u, 16u}) {
      const Params p = DeriveParams(n, k, Scheme::kDeterministic);
      uint64_t bits = 0;
      for (int trial = 0; trial < 50; ++trial) {
        std::mt19937_64 rng(TrialSeed(n, k, trial));
        const BitString f = oracle::RandomBits(n, rng);
        ++r.trials;
        Summary s;
        try {
          SeedSearchStats stats;
          s = BuildSummaryDeterministic(f, p, {}, &stats);
          r.max_seed_index = std::max(r.max_seed_index, stats.accepted_index);
        } catch (const Error& e) {
          r.seed_cap_hit |= e.code() == ErrorCode::kSeedSearchExhausted;
          if (r.first_failure.empty()) r.first_failure = e.what();
          continue;
        }
        bits = 8 * SerializeSummary(s).size();
        const BitString fp = Mutate(f, k, rng).fp;
        const uint64_t ed = BandedEditDistance(f, fp, k).value_or(k + 1);
        Alg1Trace trace;
        try {
          if (RecoverAlg1(s, fp, &trace) == f) ++r.exact;
        } catch (const Error& e) {
          if (r.first_failure.empty()) {
            r.first_failure = Fmt("n=%llu k=%u trial %d: %s",
                                  static_cast<unsigned long long>(n), k, trial,
                                  e.what());
          }
        }
        for (size_t level = 0; level < trace.matching_sizes.size(); ++level) {
          ++r.bound_checks;
          if (trace.matching_sizes[level] + ed <
              p.BlockCount(static_cast<int>(level))) {
            ++r.bound_violations;
          }
        }
      }
      if (uint64_t{k} * k <= n) {
        r.sizes.push_back({n, k, Scheme::kDeterministic, bits});
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Criterion 2.

struct Alg2Cell {
  uint64_t n;
  uint32_t k;
  int ok = 0;
  int detected = 0;
  int silent = 0;
  uint64_t bits = 0;
};

std::vector<Alg2Cell> RunAlg2Grid() {
  std::vector<Alg2Cell> cells;
  ParamOverrides ov;
  ov.o = 8;
  for (uint64_t n : {uint64_t{1} << 10, uint64_t{1} << 12}) {
    for (uint32_t k : {1u, 2u, 3u}) {
      Alg2Cell cell{n, k};
      const Params p = DeriveParams(n, k, Scheme::kAlg2Optimal, ov);
      for (int trial = 0; trial < 100; ++trial) {
        std::mt19937_64 rng(TrialSeed(n, k, 1000 + trial));
        const BitString f = oracle::RandomBits(n, rng);
        const Summary s =
            BuildSummaryRandomized(f, p, Entropy(RequiredEntropyBytes(p), rng));
        cell.bits = 8 * SerializeSummary(s).size();
        const BitString fp = Mutate(f, k, rng).fp;
        try {
          if (RecoverAlg2(s, fp) == f) {
            ++cell.ok;
          } else {
            ++cell.silent;
          }
        } catch (const Error&) {
          ++cell.detected;
        }
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Criterion 4.

bool HashStatistics(std::string* detail) {
  bool ok = true;
  std::mt19937_64 rng(44);
  std::string text;
  for (int o : {4, 8, 12}) {
    ParamOverrides ov;
    ov.o = o;
    const Params p = DeriveParams(1024, 2, Scheme::kAlg2Optimal, ov);
    const uint64_t b = p.BlockLength(0);
    const int trials = 100000;
    int collisions = 0;
    const size_t entropy_bytes = RequiredEntropyBytes(p);
    for (int trial = 0; trial < trials; ++trial) {
      const RandTable t(p, SampleSeed(p, Entropy(entropy_bytes, rng)));
      const uint64_t s = (rng() % p.BlockCount(0)) * b;
      BitString x = oracle::RandomBits(b, rng), y = oracle::RandomBits(b, rng);
      if (x == y) y[rng() % b] ^= 1;
      collisions += HashBlock(x, s, 0, t) == HashBlock(y, s, 0, t);
    }
    const double q = std::ldexp(1.0, -o);
    const double sigma = std::sqrt(q * (1 - q) / trials);
    const double rate = collisions / double(trials);
    const double z = (rate - q) / sigma;
    ok &= std::abs(z) <= 3;

    // Linearity on random triples (x, y, x ^ y) at random levels/positions.
    const RandTable t(p, SampleSeed(p, Entropy(entropy_bytes, rng)));
    std::vector<std::vector<uint64_t>> rows;
    for (int level = 0; level <= p.levels; ++level) rows.push_back(t.HashRows(level));
    int linear = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const int level = static_cast<int>(rng() % (p.levels + 1));
      const uint64_t bl = p.BlockLength(level);
      const uint64_t s = (rng() % p.BlockCount(level)) * bl;
      const BitString x = oracle::RandomBits(bl, rng), y = oracle::RandomBits(bl, rng);
      BitString z(bl);
      for (size_t i = 0; i < bl; ++i) z[i] = x[i] ^ y[i];
      const auto& r = rows[level];
      linear += HashBlock(z, s, r, o) ==
                (HashBlock(x, s, r, o) ^ HashBlock(y, s, r, o));
    }
    ok &= linear == 10000;
    text += Fmt("o=%d rate=%.5f vs %.5f (z=%+.2f), linear %d/10000; ", o, rate,
                q, z, linear);
  }
  *detail = "hash collisions over 10^5 fresh-seed distinct pairs within 3 sigma: " + text;
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 5.

CandidateSet RandomCandidates(std::mt19937_64& rng, size_t max_blocks,
                              uint64_t max_len) {
  CandidateSet c;
  c.block_len = 1 + rng() % 4;
  const size_t blocks = 1 + rng() % max_blocks;
  const uint64_t len_fp = c.block_len + rng() % (max_len - c.block_len + 1);
  const double density = 0.03 + (rng() % 20) / 100.0;
  for (size_t j = 0; j < blocks; ++j) {
    if (rng() % 4 == 0) continue;
    std::vector<uint64_t> targets;
    for (uint64_t t = 0; t + c.block_len <= len_fp; ++t) {
      if ((rng() % 1000) / 1000.0 < density) targets.push_back(t);
    }
    c.blocks.push_back(j);
    c.targets.push_back(targets);
  }
  return c;
}

bool MatchingOracles(std::string* detail) {
  std::mt19937_64 rng(55);
  int disjoint_ok = 0, plausible_ok = 0, detector_ok = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const CandidateSet c = RandomCandidates(rng, 12, 64);
    disjoint_ok += MaxMonotoneDisjointMatching(c, 0).size() ==
                   oracle::BruteMaxMonotoneDisjoint(c);
  }
  for (int trial = 0; trial < 500; ++trial) {
    const CandidateSet c = RandomCandidates(rng, 12, 48);
    const uint64_t budget = rng() % 4;
    const uint64_t len_f = c.block_len * 12;
    const uint64_t len_fp = len_f + rng() % 5 - 2;
    plausible_ok += MaxKPlausibleMatching(c, 0, budget, len_f, len_fp).size() ==
                    oracle::BruteMaxKPlausible(c, budget, len_f, len_fp);
  }
  ParamOverrides ov;
  ov.o = 2;
  for (int trial = 0; trial < 500; ++trial) {
    const uint32_t k = 1 + rng() % 3;
    const uint64_t n = 64 + rng() % 193;
    const Params p = DeriveParams(n, k, Scheme::kDeterministic, ov);
    const RandTable t(p, SampleSeed(p, Entropy(RequiredEntropyBytes(p), rng)));
    BitString f(p.n_pad);
    const uint64_t period = 1 + rng() % 9;
    for (uint64_t i = 0; i < f.size(); ++i) {
      f[i] = (rng() % 8 == 0) ? rng() & 1 : (i % period) & 1;
    }
    const int level = static_cast<int>(rng() % (p.levels + 1));
    const auto rows = t.HashRows(level);
    const uint64_t want = 1 + rng() % (2 * k);
    const bool found = DetectKBadSelfMatching(f, level, want, rows, p, std::nullopt)
                           .has_value();
    detector_ok += found == oracle::BruteBadSelfMatching(f, p.BlockLength(level),
                                                         want, rows, p.o, -1);
  }
  *detail = Fmt(
      "brute-force agreement: monotone-disjoint %d/500, k-plausible %d/500 "
      "(<= 12 blocks), bad-self-matching detector %d/500 (n <= 256)",
      disjoint_ok, plausible_ok, detector_ok);
  return disjoint_ok == 500 && plausible_ok == 500 && detector_ok == 500;
}

// ---------------------------------------------------------------------------
// Criterion 7.

struct WitnessCount {
  uint64_t formal = 0;
  uint64_t distinct = 0;
  size_t max_leaves = 0;
};

WitnessCount CountWitnesses(const MatchForest& forest, int t) {
  WitnessCount c;
  std::set<std::vector<uint64_t>> sets;
  WitnessOptions options;
  options.t = t;
  options.dedupe = false;
  EnumerateTWitnesses(forest, options,
                      [&](const Witness&, std::span<const uint64_t> leaves) {
                        ++c.formal;
                        std::vector<uint64_t> v(leaves.begin(), leaves.end());
                        c.max_leaves = std::max(c.max_leaves, v.size());
                        std::sort(v.begin(), v.end());
                        sets.insert(v);
                        return false;
                      });
  c.distinct = sets.size();
  return c;
}

MatchForest RandomForest(uint64_t base, int levels, std::mt19937_64& rng) {
  MatchForest f(base);
  std::bernoulli_distribution match(0.6), kill(0.3);
  for (int l = 0; l <= levels; ++l) {
    for (uint64_t j = 0; j < f.BlockCount(l); ++j) {
      if (f.IsLeaf(j) || (l > 0 && f.IsAlive(l - 1, j / 2))) continue;
      if (match(rng)) f.AddRoot(j, 0);
    }
    if (l == levels) break;
    for (uint64_t j : f.Leaves()) {
      if (f.IsLeaf(j) && kill(rng)) f.Kill(j);
    }
    f.Split(1);
  }
  return f;
}

MatchForest DenseForest(const Params& p, int level, std::mt19937_64& rng,
                        int kills_per_level, std::vector<uint64_t>* holes) {
  MatchForest f(p.BlockCount(0));
  for (int l = 0; l <= level; ++l) {
    for (uint64_t j = 0; j < f.BlockCount(l); ++j) {
      if (!f.IsLeaf(j) && !(l > 0 && f.IsAlive(l - 1, j / 2))) f.AddRoot(j, 0);
    }
    if (l == level) break;
    for (int i = 0; i < kills_per_level; ++i) {
      const auto leaves = f.Leaves();
      f.Kill(leaves[rng() % leaves.size()]);
    }
    f.Split(1);
  }
  for (int i = 0; i < 2; ++i) {
    const auto leaves = f.Leaves();
    f.Kill(leaves[rng() % leaves.size()]);
  }
  holes->clear();
  for (uint64_t j = 0; j < f.BlockCount(level); ++j) {
    if (!f.IsLeaf(j)) holes->push_back(j);
  }
  return f;
}

bool WitnessMachinery(std::string* detail) {
  // Hand-built forests and their hand-derived counts (formal, distinct).
  MatchForest empty(4);
  MatchForest two_roots(2);
  two_roots.AddRoot(0, 0);
  two_roots.AddRoot(1, 0);
  MatchForest pair(1);  // one tree of depth 1
  pair.AddRoot(0, 0);
  pair.Split(1);
  MatchForest deep(1);  // one full tree of depth 2
  deep.AddRoot(0, 0);
  deep.Split(1);
  deep.Split(1);
  struct Case {
    const MatchForest* forest;
    int t;
    uint64_t formal;
    uint64_t distinct;
  };
  const Case cases[] = {
      {&empty, 0, 1, 1},     {&empty, 4, 1, 1},     {&two_roots, 1, 2, 2},
      {&two_roots, 2, 4, 4}, {&two_roots, 4, 4, 4}, {&pair, 1, 1, 1},
      {&pair, 2, 6, 4},      {&pair, 4, 6, 4},      {&deep, 2, 1, 1},
      {&deep, 3, 49, 16},
  };
  int hand_ok = 0;
  for (const Case& c : cases) {
    const WitnessCount got = CountWitnesses(*c.forest, c.t);
    hand_ok += got.formal == c.formal && got.distinct == c.distinct;
  }

  // Size bound on random forests.
  std::mt19937_64 rng(77);
  bool size_ok = true;
  uint64_t decoded = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const MatchForest f =
        RandomForest(2, 1 + static_cast<int>(rng() % 3), rng);
    for (int t = 0; t <= 4; ++t) {
      const WitnessCount c = CountWitnesses(f, t);
      decoded += c.formal;
      size_ok &= c.max_leaves <= static_cast<size_t>(3 * t);
    }
  }

  // Planted errors on reachable witnesses.
  int repaired = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::mt19937_64 trng(TrialSeed(7, 7, trial));
    const Params p = DeriveParams(2048, 3, Scheme::kAlg2Optimal);
    const RandTable table(p, SampleSeed(p, Entropy(RequiredEntropyBytes(p), trng)));
    const BitString f_pad = PadFile(oracle::RandomBits(2048, trng), p);
    const int level = 2 + static_cast<int>(trng() % 3);
    std::vector<uint64_t> holes;
    const MatchForest forest =
        DenseForest(p, level, trng, static_cast<int>(trng() % 3), &holes);
    const int t = 6 * static_cast<int>(p.k);
    std::vector<std::vector<uint64_t>> pool;
    WitnessOptions options;
    options.t = t;
    options.max_witnesses = 3000;
    EnumerateTWitnesses(forest, options,
                        [&](const Witness&, std::span<const uint64_t> leaves) {
                          if (!leaves.empty() && leaves.size() <= 3) {
                            pool.emplace_back(leaves.begin(), leaves.end());
                          }
                          return false;
                        });
    if (pool.empty()) continue;
    const auto& planted = pool[trng() % pool.size()];
    const auto truth = HashLevel(f_pad, level, table).digests;
    GuessVector g{level, truth, std::vector<uint8_t>(truth.size(), 1)};
    for (uint64_t h : holes) {
      g.known[h] = 0;
      g.digests[h] = LowMask(p.o);
    }
    for (uint64_t leaf : planted) g.digests[leaf] ^= 1 + trng() % LowMask(p.o);
    const DigestStringHasher hasher(table, table.layout().VerifyRegion(level),
                                    p.BlockCount(level), p.o, p.verify_width);
    try {
      const RepairResult r =
          RepairLevel(g, forest, hasher.Hash(truth), hasher, p.o, {}, t);
      repaired += r.digests == truth;
    } catch (const Error&) {
    }
  }
  *detail = Fmt(
      "hand counts %d/%zu (t <= 4), every decoded witness <= 3t leaves: %s "
      "(%llu witnesses), planted repairs %d/200 (errors on reachable "
      "witnesses of <= 3 leaves plus 2 unknown blocks, t = 6k)",
      hand_ok, std::size(cases), size_ok ? "yes" : "NO",
      static_cast<unsigned long long>(decoded), repaired);
  return hand_ok == static_cast<int>(std::size(cases)) && size_ok && repaired == 200;
}

// ---------------------------------------------------------------------------
// Criterion 8.

bool InsdelCode(std::string* detail) {
  bool ok = true;
  std::string text;
  const uint64_t n = 4096;
  for (uint32_t k : {1u, 2u, 4u}) {
    int exact = 0, trials = 0, shift_ok = 0;
    std::map<Placement, int> per;
    for (int msg = 0; msg < 40; ++msg) {
      std::mt19937_64 rng(TrialSeed(8, k, msg));
      const BitString x = oracle::RandomBits(n, rng);
      const BitString c = EncodeInsdel(x, k);
      for (Placement placement : kAllPlacements) {
        ++trials;
        const Mutation m = PlaceEdits(c, n, k, placement, rng);
        InsdelDecodeTrace trace;
        try {
          if (DecodeInsdel(m.fp, n, k, RepetitionInnerCode::kId, &trace) == x) {
            ++exact;
            ++per[placement];
          }
        } catch (const Error&) {
        }
        shift_ok += BandedEditDistance(x, trace.x_prime, 2 * k).has_value();
      }
    }
    ok &= exact == trials && shift_ok == trials;
    text += Fmt("k=%u %d/%d (split-shift bound %d/%d); ", k, exact, trials,
                shift_ok, trials);
  }

  // n = 64. k = 1: every codeword at distance <= 1, i.e. the whole edit ball.
  std::mt19937_64 rng(88);
  const uint64_t small = 64;
  const BitString x = oracle::RandomBits(small, rng);
  const BitString c1 = EncodeInsdel(x, 1);
  uint64_t ball1 = 0, ok1 = 0;
  for (const BitString& r : oracle::EditBall(c1, 1)) {
    ++ball1;
    try {
      ok1 += DecodeInsdel(r, small, 1) == x;
    } catch (const Error&) {
    }
  }
  // k = 2: every pattern of <= 2 edits inside the first n + 2R bits (all
  // message-side outcomes, plus edits straddling into the first two inner
  // runs), each decoded through the full pipeline.
  const BitString c2 = EncodeInsdel(x, 2);
  const uint64_t window = small + 2 * RepetitionInnerCode(4).repetitions();
  const BitString head(c2.begin(), c2.begin() + window);
  uint64_t ball2 = 0, ok2 = 0;
  for (const BitString& r : oracle::EditBall(head, 2)) {
    BitString full = r;
    full.insert(full.end(), c2.begin() + window, c2.end());
    ++ball2;
    try {
      ok2 += DecodeInsdel(full, small, 2) == x;
    } catch (const Error&) {
    }
  }
  // Inner code alone: every string within radius d <= 2 of the encoding of
  // every payload of <= 4 bits and of sixteen-bit payloads.
  uint64_t inner_cases = 0, inner_ok = 0;
  for (int d = 0; d <= 2; ++d) {
    const RepetitionInnerCode code(d);
    std::vector<BitString> payloads;
    for (int len = 1; len <= 4; ++len) {
      for (uint64_t v = 0; v < (uint64_t{1} << len); ++v) {
        BitString p(len);
        for (int i = 0; i < len; ++i) p[i] = (v >> i) & 1;
        payloads.push_back(p);
      }
    }
    for (int i = 0; i < 4; ++i) payloads.push_back(oracle::RandomBits(16, rng));
    for (const BitString& p : payloads) {
      for (const BitString& r : oracle::EditBall(code.Encode(p), d)) {
        ++inner_cases;
        inner_ok += code.Decode(r, p.size()) == p;
      }
    }
  }
  ok &= ok1 == ball1 && ok2 == ball2 && inner_ok == inner_cases;
  text += Fmt(
      "n=64 k=1 full edit ball %llu/%llu; n=64 k=2 all <=2-edit patterns in the "
      "first %llu codeword bits %llu/%llu; inner code d<=2 exhaustive %llu/%llu",
      static_cast<unsigned long long>(ok1), static_cast<unsigned long long>(ball1),
      static_cast<unsigned long long>(window), static_cast<unsigned long long>(ok2),
      static_cast<unsigned long long>(ball2),
      static_cast<unsigned long long>(inner_ok),
      static_cast<unsigned long long>(inner_cases));
  *detail = "n=4096, 200 adversarial trials per k over 5 placements: " + text;
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 9.

bool ReedSolomon(std::string* detail) {
  RsCode small(7, 3, 3);
  int min_weight = 8;
  for (uint64_t m = 1; m < 512; ++m) {
    const std::vector<uint64_t> msg = {m & 7, (m >> 3) & 7, (m >> 6) & 7};
    int weight = 0;
    for (uint64_t s : msg) weight += s != 0;
    for (uint64_t s : small.EncodeRedundancy(msg)) weight += s != 0;
    min_weight = std::min(min_weight, weight);
  }

  // Production shapes: every level code of the deterministic grid.
  std::set<std::tuple<uint64_t, uint64_t, int>> shapes;
  for (uint64_t n : {uint64_t{1} << 10, uint64_t{1} << 12, uint64_t{1} << 14}) {
    for (uint32_t k : {2u, 4u, 8u, 16u}) {
      const Params p = DeriveParams(n, k, Scheme::kDeterministic);
      for (int level = 1; level <= p.levels; ++level) {
        const uint64_t msg = p.RsMessageSymbols(level);
        shapes.insert({msg + p.rs_redundancy, msg, p.rs_width});
      }
    }
  }
  const std::vector<std::tuple<uint64_t, uint64_t, int>> list(shapes.begin(),
                                                              shapes.end());
  std::mt19937_64 rng(99);
  int ok = 0, capped = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto [n_code, k_code, w] = list[trial % list.size()];
    const RsCode code(n_code, k_code, w);
    const uint64_t mask = code.field().mask();
    std::vector<uint64_t> msg(k_code);
    for (auto& s : msg) s = rng() & mask;
    const auto parity = code.EncodeRedundancy(msg);
    // floor(r/2) errors at distinct message positions (parity is trusted).
    const uint64_t r = n_code - k_code;
    uint64_t errors = r / 2;
    if (errors > k_code) {
      errors = k_code;
      ++capped;
    }
    std::vector<uint64_t> pos(k_code);
    for (uint64_t i = 0; i < k_code; ++i) pos[i] = i;
    std::shuffle(pos.begin(), pos.end(), rng);
    auto received = msg;
    for (uint64_t e = 0; e < errors; ++e) {
      received[pos[e]] ^= 1 + rng() % mask;
    }
    try {
      ok += code.Decode(received, parity) == msg;
    } catch (const Error&) {
    }
  }
  *detail = Fmt(
      "[7,3] over GF(8) minimum distance %d (want 5); %d/10000 round trips at "
      "floor(r/2) symbol errors over %zu production shapes (%d trials capped at "
      "k_code errors because the message is shorter than r/2)",
      min_weight, ok, list.size(), capped);
  return min_weight == 5 && ok == 10000;
}

// ---------------------------------------------------------------------------
// Criterion 10.

void WalshHadamard(std::vector<int64_t>& v) {
  for (size_t len = 1; len < v.size(); len <<= 1) {
    for (size_t i = 0; i < v.size(); i += 2 * len) {
      for (size_t j = i; j < i + len; ++j) {
        const int64_t a = v[j], b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
}

bool SmallBias(std::string* detail) {
  bool ok = true;
  std::string text;
  for (int m = 4; m <= 8; ++m) {
    for (int stream : {4, 8, 16}) {
      if (CeilLog2(stream) >= m) continue;
      const int bias_exponent = m - CeilLog2(stream);
      std::vector<int64_t> hist(size_t{1} << stream, 0);
      SupportEnumerator it(m);
      LaneSeed seed;
      uint64_t seeds = 0;
      while (it.Next(seed)) {
        ++hist[BiasedStream(seed).Rows(0, 1, stream)[0]];
        ++seeds;
      }
      WalshHadamard(hist);
      double worst = 0;
      for (size_t t = 1; t < hist.size(); ++t) {
        worst = std::max(worst, std::abs(hist[t] / double(seeds)) / 2);
      }
      const bool good =
          seeds == (uint64_t{1} << (2 * m)) && worst <= std::ldexp(1.0, -bias_exponent);
      ok &= good;
      text += Fmt("m=%d N=%d worst %.4f <= 2^-%d%s; ", m, stream, worst,
                  bias_exponent, good ? "" : " VIOLATED");
    }
  }
  *detail = "all parity tests over all seeds of width 2m <= 16: " + text;
  return ok;
}

}  // namespace
}  // namespace dexch

int main() {
  using namespace dexch;
  Report report;
  auto start = Clock::now();

  const DeterministicGridResult det = RunDeterministicGrid();
  report.Line(1,
              det.exact == det.trials && !det.seed_cap_hit,
              Fmt("deterministic scheme, n in {2^10,2^12,2^14} x k in {2,4,8,16}, "
                  "50 trials of exactly k edits: %llu/%llu exact; largest "
                  "accepted seed index %llu (cap 2^24)%s%s",
                  static_cast<unsigned long long>(det.exact),
                  static_cast<unsigned long long>(det.trials),
                  static_cast<unsigned long long>(det.max_seed_index),
                  det.first_failure.empty() ? "" : "; first failure: ",
                  det.first_failure.c_str()),
              start);
  const auto det_time = Clock::now() - start;

  start = Clock::now();
  const std::vector<Alg2Cell> cells = RunAlg2Grid();
  bool alg2_ok = true;
  std::string alg2_text;
  for (const Alg2Cell& c : cells) {
    alg2_ok &= c.ok >= 95 && c.silent == 0;
    alg2_text += Fmt("n=%llu k=%u %d/100 (detected %d, silent %d); ",
                     static_cast<unsigned long long>(c.n), c.k, c.ok, c.detected,
                     c.silent);
  }
  report.Line(2, alg2_ok, "randomized optimal scheme (alg2) with o=8: " + alg2_text, start);

  start = Clock::now();
  double lo = 0, hi = 0;
  const double det_spread = Spread(det.sizes, &lo, &hi);
  std::string fit_text = Fmt(
      "deterministic C = bits / (k log2^2(n/k)) in [%.2f, %.2f], spread %.2f "
      "over %zu grid points with k <= sqrt(n); ",
      lo, hi, det_spread, det.sizes.size());
  std::vector<FitPoint> alg2_on_grid;
  {
    ParamOverrides ov;
    ov.o = 8;
    for (const FitPoint& pt : det.sizes) {
      const Params p = DeriveParams(pt.n, pt.k, Scheme::kAlg2Optimal, ov);
      alg2_on_grid.push_back(
          {pt.n, pt.k, Scheme::kAlg2Optimal, 8 * SerializedSummaryBytes(p)});
    }
  }
  const double alg2_spread = Spread(alg2_on_grid, &lo, &hi);
  fit_text += Fmt("alg2 C' = bits / (k log2(n/k)) in [%.2f, %.2f], "
                  "spread %.2f on the same grid; ",
                  lo, hi, alg2_spread);
  std::vector<FitPoint> alg2_measured;
  for (const Alg2Cell& c : cells) {
    alg2_measured.push_back({c.n, c.k, Scheme::kAlg2Optimal, c.bits});
  }
  const double alg2_spread2 = Spread(alg2_measured, &lo, &hi);
  fit_text += Fmt("C' in [%.2f, %.2f], spread %.2f on the criterion-2 grid",
                  lo, hi, alg2_spread2);
  report.Line(3, det_spread <= 2 && alg2_spread <= 2 && alg2_spread2 <= 2,
              fit_text, start);

  start = Clock::now();
  std::string detail;
  const bool hash_ok = HashStatistics(&detail);
  report.Line(4, hash_ok, detail, start);

  start = Clock::now();
  const bool match_ok = MatchingOracles(&detail);
  report.Line(5, match_ok, detail, start);

  report.Line(6, det.bound_violations == 0 && det.bound_checks > 0,
              Fmt("matching size >= 4k*2^l - ED(F,F') at every matched level of "
                  "every criterion-1 trial: %llu checks, %llu violations",
                  static_cast<unsigned long long>(det.bound_checks),
                  static_cast<unsigned long long>(det.bound_violations)),
              Clock::now() - det_time);

  start = Clock::now();
  const bool witness_ok = WitnessMachinery(&detail);
  report.Line(7, witness_ok, detail, start);

  start = Clock::now();
  const bool insdel_ok = InsdelCode(&detail);
  report.Line(8, insdel_ok, detail, start);

  start = Clock::now();
  const bool rs_ok = ReedSolomon(&detail);
  report.Line(9, rs_ok, detail, start);

  start = Clock::now();
  const bool bias_ok = SmallBias(&detail);
  report.Line(10, bias_ok, detail, start);

  std::printf("%d criteria failed\n", report.failed());
  return report.failed() == 0 ? 0 : 1;
}
