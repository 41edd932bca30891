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

#include "dexch/gf2.h"

#include "dexch/bits.h"

namespace dexch {
namespace {

size_t WordsFor(size_t bits) { return (bits + 63) / 64; }

int LowestBit(const Words& v) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i]) return static_cast<int>(i * 64 + __builtin_ctzll(v[i]));
  }
  return -1;
}

void XorInto(Words& dst, const Words& src) {
  if (dst.size() < src.size()) dst.resize(src.size(), 0);
  for (size_t i = 0; i < src.size(); ++i) dst[i] ^= src[i];
}

}  // namespace

Gf2Eliminator::Gf2Eliminator(size_t rows)
    : rows_(rows), pivot_of_bit_(rows, -1) {}

void Gf2Eliminator::Reduce(Words& vec, Words& comb) const {
  for (int bit = LowestBit(vec); bit >= 0; bit = LowestBit(vec)) {
    const int32_t p = pivot_of_bit_[bit];
    if (p < 0) return;
    XorInto(vec, pivots_[p].vec);
    XorInto(comb, pivots_[p].comb);
  }
}

bool Gf2Eliminator::AddColumn(const Words& column) {
  Words vec = column;
  vec.resize(WordsFor(rows_), 0);
  Words comb(WordsFor(columns_ + 1), 0);
  comb[columns_ / 64] |= uint64_t{1} << (columns_ % 64);
  ++columns_;
  Reduce(vec, comb);
  const int bit = LowestBit(vec);
  if (bit < 0) {
    deficient_ = true;
    return false;
  }
  pivot_of_bit_[bit] = static_cast<int32_t>(pivots_.size());
  pivots_.push_back({std::move(vec), std::move(comb)});
  return true;
}

std::optional<std::vector<uint8_t>> Gf2Eliminator::Solve(
    const Words& rhs) const {
  if (deficient_) return std::nullopt;
  Words vec = rhs;
  vec.resize(WordsFor(rows_), 0);
  Words comb(WordsFor(columns_), 0);
  Reduce(vec, comb);
  if (LowestBit(vec) >= 0) return std::nullopt;
  std::vector<uint8_t> x(columns_, 0);
  for (size_t i = 0; i < columns_; ++i) {
    x[i] = (i / 64 < comb.size()) ? (comb[i / 64] >> (i % 64)) & 1 : 0;
  }
  return x;
}

}  // namespace dexch
