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

#ifndef DEXCH_REED_SOLOMON_H_
#define DEXCH_REED_SOLOMON_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dexch/galois_field.h"

namespace dexch {

// Systematic narrow-sense Reed-Solomon code over GF(2^w): generator roots
// x^1 .. x^r, codeword = message || parity, minimum distance r + 1.
// Only the parity travels in a summary; the receiver supplies its own guess
// of the message part.
class RsCode {
 public:
  RsCode(uint64_t n_code, uint64_t k_code, int width);

  uint64_t n_code() const { return n_code_; }
  uint64_t k_code() const { return k_code_; }
  uint64_t r_code() const { return n_code_ - k_code_; }
  int width() const { return field_->width(); }
  const GaloisField& field() const { return *field_; }

  // All-ones symbol used by callers to mark unknown message positions.
  uint64_t sentinel() const { return field_->mask(); }

  std::vector<uint64_t> EncodeRedundancy(std::span<const uint64_t> message) const;

  // Unique decoding up to floor(r/2) symbol errors (sentinels count as
  // errors). Throws kDecodeFailure when the locator does not split into
  // distinct in-range roots.
  std::vector<uint64_t> Decode(std::span<const uint64_t> received_message,
                               std::span<const uint64_t> parity) const;

 private:
  uint64_t n_code_;
  uint64_t k_code_;
  std::shared_ptr<const GaloisField> field_;
  std::vector<uint64_t> generator_;  // monic, generator_[i] = coeff of x^i
  std::vector<ConstantMultiplier> gen_mul_;
  std::vector<ConstantMultiplier> root_mul_;
};

}  // namespace dexch

#endif  // DEXCH_REED_SOLOMON_H_
