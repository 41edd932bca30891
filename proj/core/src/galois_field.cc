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

#include "dexch/galois_field.h"

#include <array>
#include <string>

#include "dexch/bits.h"
#include "dexch/error.h"

#if defined(__PCLMUL__)
#include <wmmintrin.h>
#endif

namespace dexch {
namespace {

// Indexed by width; generated by searching odd tails in increasing order and
// testing the order of x against the factorization of 2^w - 1.
constexpr std::array<uint16_t, 65> kPrimitiveTails = {
    0,    0,    0x3,  0x3,  0x3,  0x5,  0x3,  0x3,  0x1d, 0x11, 0x9,
    0x5,  0x53, 0x1b, 0x2b, 0x3,  0x2d, 0x9,  0x27, 0x27, 0x9,  0x5,
    0x3,  0x21, 0x1b, 0x9,  0x47, 0x27, 0x9,  0x5,  0x53, 0x9,  0xaf,
    0x53, 0xe7, 0x5,  0x77, 0x3f, 0x63, 0x11, 0x39, 0x9,  0x3f, 0x59,
    0x65, 0x1b, 0x12f, 0x21, 0xb7, 0x71, 0x1d, 0x4b, 0x9,  0x47, 0x7d,
    0x47, 0x95, 0x2d, 0x63, 0x7b, 0x3,  0x27, 0x69, 0x3,  0x1b,
};

}  // namespace

uint64_t PrimitiveTail(int width) {
  if (width < 2 || width > 64) {
    throw Error(ErrorCode::kInvalidArgument,
                "field width " + std::to_string(width) + " not in [2, 64]");
  }
  return kPrimitiveTails[width];
}

void CarrylessMultiply(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
#if defined(__PCLMUL__)
  __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
  __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
  __m128i r = _mm_clmulepi64_si128(va, vb, 0x00);
  lo = static_cast<uint64_t>(_mm_cvtsi128_si64(r));
  hi = static_cast<uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)));
#else
  hi = 0;
  lo = 0;
  while (b) {
    int i = __builtin_ctzll(b);
    lo ^= a << i;
    if (i) hi ^= a >> (64 - i);
    b &= b - 1;
  }
#endif
}

GaloisField::GaloisField(int width)
    : width_(width), tail_(PrimitiveTail(width)), mask_(LowMask(width)) {
  if (width_ <= 16) {
    const uint64_t n = mask_;
    exp_.resize(2 * n);
    log_.assign(n + 1, 0);
    uint64_t v = 1;
    for (uint64_t i = 0; i < n; ++i) {
      exp_[i] = static_cast<uint32_t>(v);
      log_[v] = static_cast<uint32_t>(i);
      v <<= 1;
      if (v >> width_) v = (v ^ tail_) & mask_;
    }
    for (uint64_t i = n; i < 2 * n; ++i) exp_[i] = exp_[i - n];
  }
}

uint64_t GaloisField::Reduce(uint64_t hi, uint64_t lo) const {
  // hi:lo has degree < 2w - 1, so the part above bit w fits in one word.
  while (true) {
    uint64_t top, low;
    if (width_ == 64) {
      top = hi;
      low = lo;
    } else {
      top = (lo >> width_) | (hi << (64 - width_));
      low = lo & mask_;
    }
    if (!top) return low;
    uint64_t h, l;
    CarrylessMultiply(top, tail_, h, l);
    hi = h;
    lo = low ^ l;
  }
}

uint64_t GaloisField::Mul(uint64_t a, uint64_t b) const {
  if (!a || !b) return 0;
  if (!log_.empty()) {
    return exp_[log_[a] + log_[b]];
  }
  uint64_t hi, lo;
  CarrylessMultiply(a, b, hi, lo);
  return Reduce(hi, lo);
}

uint64_t GaloisField::Pow(uint64_t a, uint64_t e) const {
  uint64_t r = 1;
  while (e) {
    if (e & 1) r = Mul(r, a);
    a = Mul(a, a);
    e >>= 1;
  }
  return r;
}

uint64_t GaloisField::Inv(uint64_t a) const {
  if (a == 0) throw Error(ErrorCode::kInvalidArgument, "inverse of zero");
  if (!log_.empty()) return exp_[(mask_ - log_[a]) % mask_];
  // a^(2^w - 2)
  return Pow(a, mask_ - 1);
}

uint64_t GaloisField::Exp(uint64_t e) const {
  if (!exp_.empty()) return exp_[e % mask_];
  return Pow(2, e % mask_);
}

FieldElem GfMul(const FieldElem& a, const FieldElem& b) {
  if (a.width != b.width) {
    throw Error(ErrorCode::kInvalidArgument, "field width mismatch");
  }
  GaloisField f(a.width);
  if ((a.value & ~f.mask()) || (b.value & ~f.mask())) {
    throw Error(ErrorCode::kInvalidArgument, "element exceeds field width");
  }
  return {f.Mul(a.value, b.value), a.width};
}

FieldElem GfInv(const FieldElem& a) {
  GaloisField f(a.width);
  return {f.Inv(a.value), a.width};
}

ConstantMultiplier::ConstantMultiplier(const GaloisField& field,
                                       uint64_t constant) {
  const int chunks = (field.width() + 7) / 8;
  tables_.assign(chunks, std::vector<uint64_t>(256));
  for (int c = 0; c < chunks; ++c) {
    for (uint64_t b = 0; b < 256; ++b) {
      uint64_t v = b << (8 * c);
      tables_[c][b] = (v & ~field.mask()) ? 0 : field.Mul(v, constant);
    }
  }
}

}  // namespace dexch
