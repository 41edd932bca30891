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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dexch/error.h"
#include "oracles.h"

namespace dexch {
namespace {

std::vector<uint8_t> Entropy(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<uint8_t> out(n);
  for (auto& b : out) b = static_cast<uint8_t>(rng());
  return out;
}

RandTable MakeTable(const Params& p, uint64_t seed) {
  return RandTable(p, SampleSeed(p, Entropy(8192, seed)));
}

// Direct transcription of the definition: h_i = XOR_j S_j R[s + j, level, i].
HashDigest DefinitionHash(const BitString& bits, uint64_t s, int level,
                          const RandTable& t) {
  const int o = t.params().o;
  if (bits.size() <= static_cast<size_t>(o)) {
    HashDigest d = 0;
    for (size_t i = 0; i < bits.size(); ++i) d |= HashDigest(bits[i]) << i;
    return d;
  }
  HashDigest d = 0;
  for (int i = 0; i < o; ++i) {
    int h = 0;
    for (size_t j = 0; j < bits.size(); ++j) {
      h ^= bits[j] & t.TableBit(s + j, level, i);
    }
    d |= HashDigest(h) << i;
  }
  return d;
}

TEST(IpHashTest, MatchesDefinition) {
  const Params p = DeriveParams(1024, 2, Scheme::kAlg1Random);
  const RandTable t = MakeTable(p, 1);
  std::mt19937_64 rng(2);
  for (int level = 0; level <= p.levels; ++level) {
    const uint64_t b = p.BlockLength(level);
    const uint64_t s = (rng() % p.BlockCount(level)) * b;
    const BitString bits = oracle::RandomBits(b, rng);
    EXPECT_EQ(HashBlock(bits, s, level, t), DefinitionHash(bits, s, level, t));
  }
}

TEST(IpHashTest, ZeroBlockAndShortBlocks) {
  const Params p = DeriveParams(1024, 2, Scheme::kAlg1Random);
  const RandTable t = MakeTable(p, 3);
  EXPECT_EQ(HashBlock(BitString(p.BlockLength(0), 0), 0, 0, t), 0u);
  ASSERT_GE(p.o, 4);
  BitString short_bits(p.o - 2, 0);
  short_bits[0] = 1;
  short_bits[p.o - 3] = 1;
  const HashDigest d = HashBlock(short_bits, 5, 0, t);
  EXPECT_EQ(d, 1u | (uint64_t{1} << (p.o - 3)));
  EXPECT_EQ(d >> (p.o - 2), 0u);
  EXPECT_THROW(HashBlock(BitString(64, 1), p.n_pad - 10, 0, t), Error);
}

TEST(IpHashTest, LinearOnLongBlocks) {
  const Params p = DeriveParams(1 << 12, 4, Scheme::kAlg1Random);
  const RandTable t = MakeTable(p, 4);
  const auto rows = t.HashRows(0);
  std::mt19937_64 rng(5);
  const uint64_t b = p.BlockLength(0);
  for (int trial = 0; trial < 2000; ++trial) {
    const BitString x = oracle::RandomBits(b, rng);
    const BitString y = oracle::RandomBits(b, rng);
    BitString z(b);
    for (size_t i = 0; i < b; ++i) z[i] = x[i] ^ y[i];
    const uint64_t s = (rng() % p.BlockCount(0)) * b;
    EXPECT_EQ(HashBlock(z, s, rows, p.o),
              HashBlock(x, s, rows, p.o) ^ HashBlock(y, s, rows, p.o));
  }
}

TEST(IpHashTest, CollisionRateNearTwoToMinusO) {
  std::mt19937_64 rng(6);
  for (int o : {4, 8}) {
    ParamOverrides ov;
    ov.o = o;
    const Params p = DeriveParams(1024, 2, Scheme::kAlg2Optimal, ov);
    const uint64_t b = p.BlockLength(0);
    const int trials = 20000;
    int collisions = 0;
    for (int trial = 0; trial < trials; ++trial) {
      const RandTable t = MakeTable(p, 100000 + trial);
      BitString x = oracle::RandomBits(b, rng), y = oracle::RandomBits(b, rng);
      if (x == y) y[0] ^= 1;
      collisions += HashBlock(x, 0, 0, t) == HashBlock(y, 0, 0, t);
    }
    const double q = std::ldexp(1.0, -o);
    const double sigma = std::sqrt(q * (1 - q) / trials);
    EXPECT_NEAR(collisions / double(trials), q, 3 * sigma) << "o=" << o;
  }
}

TEST(IpHashTest, FinestLevelIsTheFileItself) {
  const Params p = DeriveParams(1000, 3, Scheme::kAlg1Random);
  const RandTable t = MakeTable(p, 7);
  std::mt19937_64 rng(8);
  BitString f = oracle::RandomBits(p.n_pad, rng);
  const HashVector top = HashLevel(f, p.levels, t);
  ASSERT_LE(p.BlockLength(p.levels), static_cast<uint64_t>(p.o));
  BitString back;
  for (HashDigest d : top.digests) {
    AppendBitsLsb(back, d, static_cast<int>(p.BlockLength(p.levels)));
  }
  EXPECT_EQ(back, f);
  EXPECT_EQ(HashLevel(f, 0, t).digests.size(), 4u * p.k);
  EXPECT_THROW(HashLevel(f, p.levels + 1, t), Error);
  f.pop_back();
  EXPECT_THROW(HashLevel(f, 0, t), Error);
}

TEST(IpHashTest, BlockLocality) {
  const Params p = DeriveParams(1 << 12, 4, Scheme::kAlg1Random);
  const RandTable t = MakeTable(p, 9);
  std::mt19937_64 rng(10);
  const BitString f = oracle::RandomBits(p.n_pad, rng);
  for (int level = 0; level <= p.levels; ++level) {
    BitString g = f;
    const uint64_t b = p.BlockLength(level);
    g[3 * b + rng() % b] ^= 1;
    const auto hf = HashLevel(f, level, t), hg = HashLevel(g, level, t);
    for (size_t j = 0; j < hf.digests.size(); ++j) {
      if (j != 3) EXPECT_EQ(hf.digests[j], hg.digests[j]);
    }
  }
}

TEST(IpHashTest, DigestStringHasherIsLinearAndConsistent) {
  const Params p = DeriveParams(1 << 12, 3, Scheme::kAlg2Optimal);
  const RandTable t = MakeTable(p, 11);
  const int level = 2;
  const uint64_t count = p.BlockCount(level);
  DigestStringHasher h(t, t.layout().VerifyRegion(level), count, p.o,
                       p.verify_width);
  std::mt19937_64 rng(12);
  std::vector<HashDigest> a(count), b(count), c(count);
  for (uint64_t i = 0; i < count; ++i) {
    a[i] = rng() & LowMask(p.o);
    b[i] = rng() & LowMask(p.o);
    c[i] = a[i] ^ b[i];
  }
  const Words ha = h.Hash(a), hb = h.Hash(b), hc = h.Hash(c);
  for (size_t i = 0; i < ha.size(); ++i) EXPECT_EQ(hc[i], ha[i] ^ hb[i]);
  EXPECT_EQ(h.Hash(std::vector<HashDigest>(count, 0)), Words(h.words(), 0));

  // Summing single-bit contributions reproduces the hash.
  Words acc(h.words(), 0);
  for (uint64_t pos = 0; pos < count; ++pos) {
    for (int bit = 0; bit < p.o; ++bit) {
      if ((a[pos] >> bit) & 1) {
        h.AddContribution(acc, count * p.o, pos * p.o + bit, pos * p.o + bit);
      }
    }
  }
  EXPECT_EQ(acc, ha);

  // A one-digest subset is shorter than the output and passes through.
  const std::vector<uint64_t> one = {5};
  const Words single = h.HashSubset(a, one);
  EXPECT_EQ(single[0], a[5]);
}

TEST(IpHashTest, FinalCheckSeesSingleFlips) {
  const Params p = DeriveParams(1 << 12, 2, Scheme::kAlg1Random);
  const RandTable t = MakeTable(p, 13);
  std::mt19937_64 rng(14);
  const BitString f = oracle::RandomBits(p.n_pad, rng);
  const uint64_t base = FinalCheckHash(f, t);
  for (int trial = 0; trial < 50; ++trial) {
    BitString g = f;
    g[rng() % g.size()] ^= 1;
    EXPECT_NE(FinalCheckHash(g, t), base);
  }
}

}  // namespace
}  // namespace dexch
