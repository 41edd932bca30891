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

#include "dexch/bits.h"

#include "dexch/error.h"

namespace dexch {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInsufficientEntropy: return "InsufficientEntropy";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEnumerationTooWide: return "EnumerationTooWide";
    case ErrorCode::kDecodeFailure: return "DecodeFailure";
    case ErrorCode::kFinalCheckMismatch: return "FinalCheckMismatch";
    case ErrorCode::kWitnessSearchExhausted: return "WitnessSearchExhausted";
    case ErrorCode::kSeedSearchExhausted: return "SeedSearchExhausted";
    case ErrorCode::kInnerDecodeFailure: return "InnerDecodeFailure";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kTruncation: return "Truncation";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
  }
  return "Unknown";
}

BitString BytesToBits(std::span<const uint8_t> bytes) {
  BitString bits;
  bits.reserve(bytes.size() * 8);
  for (uint8_t b : bytes) {
    for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
  }
  return bits;
}

std::vector<uint8_t> BitsToBytes(std::span<const uint8_t> bits) {
  std::vector<uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<uint8_t>(0x80 >> (i % 8));
  }
  return bytes;
}

void AppendBitsLsb(BitString& out, uint64_t value, int width) {
  for (int i = 0; i < width; ++i) out.push_back((value >> i) & 1);
}

uint64_t ReadBitsLsb(std::span<const uint8_t> bits, size_t offset, int width) {
  uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    if (bits[offset + i]) v |= uint64_t{1} << i;
  }
  return v;
}

int CeilLog2(uint64_t x) {
  if (x <= 1) return 0;
  return 64 - __builtin_clzll(x - 1);
}

}  // namespace dexch
