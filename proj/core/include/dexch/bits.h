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

#ifndef DEXCH_BITS_H_
#define DEXCH_BITS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dexch {

// One element per bit, each 0 or 1. Files are handled as bit strings
// throughout; byte buffers convert MSB-first.
using BitString = std::vector<uint8_t>;

BitString BytesToBits(std::span<const uint8_t> bytes);

// Packs MSB-first; a trailing partial byte is zero-filled.
std::vector<uint8_t> BitsToBytes(std::span<const uint8_t> bits);

// Low `width` bits of `value`, least significant first.
void AppendBitsLsb(BitString& out, uint64_t value, int width);
uint64_t ReadBitsLsb(std::span<const uint8_t> bits, size_t offset, int width);

inline uint64_t LowMask(int width) {
  return width >= 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
}

inline int Parity(uint64_t x) { return __builtin_parityll(x); }

// ceil(log2(x)) for x >= 1.
int CeilLog2(uint64_t x);

}  // namespace dexch

#endif  // DEXCH_BITS_H_
