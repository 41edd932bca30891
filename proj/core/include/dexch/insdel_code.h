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

#ifndef DEXCH_INSDEL_CODE_H_
#define DEXCH_INSDEL_CODE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dexch/bits.h"
#include "dexch/params.h"
#include "dexch/summary.h"

namespace dexch {

// A code for the redundancy part of a systematic codeword. Decode must
// return the payload whenever the received string is within edit_radius()
// insertions, deletions and substitutions of Encode(payload).
class InnerCode {
 public:
  virtual ~InnerCode() = default;

  virtual uint8_t id() const = 0;
  virtual int edit_radius() const = 0;
  virtual uint64_t EncodedLength(uint64_t payload_bits) const = 0;
  virtual BitString Encode(std::span<const uint8_t> payload) const = 0;
  // Throws kInnerDecodeFailure when the input cannot be a corruption of a
  // payload_bits-bit payload within the radius.
  virtual BitString Decode(std::span<const uint8_t> received,
                           uint64_t payload_bits) const = 0;
};

// Repeats every payload bit 4d + 1 times. A shift of at most d leaves the
// central 2d + 1 positions of each run inside the run, and at most d of them
// can hold inserted or substituted symbols, so a positional majority over
// that window recovers the bit. Expansion factor 4d + 1.
class RepetitionInnerCode final : public InnerCode {
 public:
  static constexpr uint8_t kId = 1;

  explicit RepetitionInnerCode(int d);

  uint8_t id() const override { return kId; }
  int edit_radius() const override { return d_; }
  int repetitions() const { return 4 * d_ + 1; }
  uint64_t EncodedLength(uint64_t payload_bits) const override {
    return payload_bits * static_cast<uint64_t>(repetitions());
  }
  BitString Encode(std::span<const uint8_t> payload) const override;
  BitString Decode(std::span<const uint8_t> received,
                   uint64_t payload_bits) const override;

 private:
  int d_;
};

// The inner code used for budget k (edit radius 2k). Throws
// kInvalidArgument for unknown ids.
std::unique_ptr<InnerCode> MakeInnerCode(uint8_t id, uint32_t k);

// Sizes of a codeword for an n-bit message and codeword edit budget k.
struct InsdelLayout {
  Params summary_params;   // deterministic scheme at budget 2k
  uint64_t summary_bytes;  // serialized summary length
  uint64_t payload_bits;   // max(8 * summary_bytes, k)
  uint64_t redundancy_bits;
};

InsdelLayout ComputeInsdelLayout(uint64_t n, uint32_t k,
                                 uint8_t inner_id = RepetitionInnerCode::kId);

// Codeword = x followed by the inner encoding of the deterministic summary
// of x for budget 2k. The first n bits are x verbatim.
BitString EncodeInsdel(std::span<const uint8_t> x, uint32_t k,
                       const DeterministicOptions& options = {},
                       uint8_t inner_id = RepetitionInnerCode::kId);

struct InsdelDecodeTrace {
  BitString x_prime;  // first n received bits
  BitString e_prime;  // the remainder
};

// Recovers x from a codeword carrying at most k edits. Throws
// kLengthMismatch when |cp| is outside [n + r - k, n + r + k],
// kInnerDecodeFailure when the summary cannot be restored, and the recovery
// errors (kDecodeFailure, kFinalCheckMismatch) otherwise.
BitString DecodeInsdel(std::span<const uint8_t> cp, uint64_t n, uint32_t k,
                       uint8_t inner_id = RepetitionInnerCode::kId,
                       InsdelDecodeTrace* trace = nullptr);

// DXC1 container: "DXC1", n u64, k u32, inner id u8, codeword length in
// bits u64, then the codeword bits packed MSB-first (systematic bits first).
struct CodewordFile {
  uint64_t n = 0;
  uint32_t k = 0;
  uint8_t inner_id = RepetitionInnerCode::kId;
  BitString bits;

  friend bool operator==(const CodewordFile&, const CodewordFile&) = default;
};

std::vector<uint8_t> SerializeCodeword(const CodewordFile& c);
CodewordFile DeserializeCodeword(std::span<const uint8_t> bytes);

}  // namespace dexch

#endif  // DEXCH_INSDEL_CODE_H_
