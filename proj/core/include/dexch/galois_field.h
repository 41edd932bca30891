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

#ifndef DEXCH_GALOIS_FIELD_H_
#define DEXCH_GALOIS_FIELD_H_

#include <cstdint>
#include <vector>

namespace dexch {

// Low-order terms of a fixed primitive polynomial x^w + tail(x) for every
// width 2 <= w <= 64. Each tail has degree <= 8, so a product reduces in a
// couple of carry-less folds.
uint64_t PrimitiveTail(int width);

// The reduction polynomial without its leading x^w term, as recorded in
// summary headers.
inline uint64_t PrimitivePolynomialLow(int width) { return PrimitiveTail(width); }

// Carry-less 64x64 -> 128 product; hi receives bits 64..127.
void CarrylessMultiply(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo);

// GF(2^w) with x as a primitive element. Widths up to 16 also get log /
// antilog tables.
class GaloisField {
 public:
  explicit GaloisField(int width);

  int width() const { return width_; }
  uint64_t mask() const { return mask_; }
  uint64_t order() const { return mask_; }  // multiplicative group size

  uint64_t Mul(uint64_t a, uint64_t b) const;
  uint64_t Square(uint64_t a) const { return Mul(a, a); }
  uint64_t Pow(uint64_t a, uint64_t e) const;
  uint64_t Inv(uint64_t a) const;
  uint64_t Div(uint64_t a, uint64_t b) const { return Mul(a, Inv(b)); }
  // x^e, the e-th power of the primitive element.
  uint64_t Exp(uint64_t e) const;

 private:
  uint64_t Reduce(uint64_t hi, uint64_t lo) const;

  int width_;
  uint64_t tail_;
  uint64_t mask_;
  std::vector<uint32_t> log_;
  std::vector<uint32_t> exp_;
};

// Carrier for an element tagged with its field width.
struct FieldElem {
  uint64_t value = 0;
  int width = 0;

  friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

// Throws kInvalidArgument on mismatched widths or out-of-range values.
FieldElem GfMul(const FieldElem& a, const FieldElem& b);
FieldElem GfInv(const FieldElem& a);

// Multiplication by a fixed constant through four byte tables; used on the
// hot paths of Reed-Solomon encoding and syndrome evaluation.
class ConstantMultiplier {
 public:
  ConstantMultiplier() = default;
  ConstantMultiplier(const GaloisField& field, uint64_t constant);

  uint64_t operator()(uint64_t a) const {
    uint64_t r = 0;
    for (size_t i = 0; i < tables_.size(); ++i) {
      r ^= tables_[i][(a >> (8 * i)) & 0xff];
    }
    return r;
  }

 private:
  std::vector<std::vector<uint64_t>> tables_;
};

}  // namespace dexch

#endif  // DEXCH_GALOIS_FIELD_H_
