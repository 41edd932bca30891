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

#include "dexch/insdel_code.h"

#include <algorithm>
#include <string>

#include "dexch/error.h"
#include "dexch/recovery.h"

namespace dexch {
namespace {

constexpr char kMagic[4] = {'D', 'X', 'C', '1'};
constexpr size_t kHeaderBytes = 4 + 8 + 4 + 1 + 8;

void PutLe(std::vector<uint8_t>& out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t GetLe(std::span<const uint8_t> in, size_t offset, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= uint64_t{in[offset + i]} << (8 * i);
  return v;
}

uint32_t InnerRadius(uint32_t k) { return 2 * k; }

}  // namespace

RepetitionInnerCode::RepetitionInnerCode(int d) : d_(d) {
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "edit radius must be >= 0");
}

BitString RepetitionInnerCode::Encode(std::span<const uint8_t> payload) const {
  const int r = repetitions();
  BitString out;
  out.reserve(payload.size() * r);
  for (uint8_t bit : payload) out.insert(out.end(), r, bit & 1);
  return out;
}

BitString RepetitionInnerCode::Decode(std::span<const uint8_t> received,
                                      uint64_t payload_bits) const {
  const uint64_t expected = EncodedLength(payload_bits);
  const uint64_t got = received.size();
  if (got + d_ < expected || got > expected + d_) {
    throw Error(ErrorCode::kInnerDecodeFailure,
                "received " + std::to_string(got) + " bits, expected " +
                    std::to_string(expected) + " +- " + std::to_string(d_));
  }
  const uint64_t r = repetitions();
  BitString out(payload_bits, 0);
  for (uint64_t i = 0; i < payload_bits; ++i) {
    // Window [i*r + d, i*r + 3d]; the length check keeps it inside
    // `received`, since (i+1)*r - 1 - d <= expected - 1 - d < got.
    const uint64_t lo = i * r + d_;
    const uint64_t hi = std::min<uint64_t>(i * r + 3 * d_ + 1, got);
    uint64_t ones = 0;
    for (uint64_t q = lo; q < hi; ++q) ones += received[q] & 1;
    out[i] = 2 * ones > hi - lo ? 1 : 0;
  }
  return out;
}

std::unique_ptr<InnerCode> MakeInnerCode(uint8_t id, uint32_t k) {
  if (id == RepetitionInnerCode::kId) {
    return std::make_unique<RepetitionInnerCode>(static_cast<int>(InnerRadius(k)));
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown inner code id " + std::to_string(id));
}

InsdelLayout ComputeInsdelLayout(uint64_t n, uint32_t k, uint8_t inner_id) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  InsdelLayout layout;
  layout.summary_params = DeriveParams(n, 2 * k, Scheme::kDeterministic);
  layout.summary_bytes = SerializedSummaryBytes(layout.summary_params);
  layout.payload_bits = std::max<uint64_t>(8 * layout.summary_bytes, k);
  layout.redundancy_bits =
      MakeInnerCode(inner_id, k)->EncodedLength(layout.payload_bits);
  return layout;
}

BitString EncodeInsdel(std::span<const uint8_t> x, uint32_t k,
                       const DeterministicOptions& options, uint8_t inner_id) {
  if (k == 0 || k >= x.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < k < |x|");
  }
  const auto inner = MakeInnerCode(inner_id, k);
  const Params params = DeriveParams(x.size(), 2 * k, Scheme::kDeterministic);
  const Summary s = BuildSummaryDeterministic(x, params, options);
  BitString payload = BytesToBits(SerializeSummary(s));
  if (payload.size() < k) payload.resize(k, 0);
  const BitString redundancy = inner->Encode(payload);
  BitString out(x.begin(), x.end());
  out.insert(out.end(), redundancy.begin(), redundancy.end());
  return out;
}

BitString DecodeInsdel(std::span<const uint8_t> cp, uint64_t n, uint32_t k,
                       uint8_t inner_id, InsdelDecodeTrace* trace) {
  const InsdelLayout layout = ComputeInsdelLayout(n, k, inner_id);
  const uint64_t expected = n + layout.redundancy_bits;
  if (cp.size() + k < expected || cp.size() > expected + k) {
    throw Error(ErrorCode::kLengthMismatch,
                "codeword has " + std::to_string(cp.size()) + " bits, expected " +
                    std::to_string(expected) + " +- " + std::to_string(k));
  }
  const auto x_prime = cp.first(n);
  const auto e_prime = cp.subspan(n);
  if (trace != nullptr) {
    trace->x_prime.assign(x_prime.begin(), x_prime.end());
    trace->e_prime.assign(e_prime.begin(), e_prime.end());
  }

  const auto inner = MakeInnerCode(inner_id, k);
  BitString payload = inner->Decode(e_prime, layout.payload_bits);
  payload.resize(8 * layout.summary_bytes);
  Summary s;
  try {
    s = DeserializeSummary(BitsToBytes(payload));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInnerDecodeFailure,
                std::string("restored summary is invalid (") + e.what() + ")");
  }
  if (s.params != layout.summary_params) {
    throw Error(ErrorCode::kInnerDecodeFailure,
                "restored summary has unexpected parameters");
  }
  return RecoverAlg1(s, x_prime);
}

std::vector<uint8_t> SerializeCodeword(const CodewordFile& c) {
  std::vector<uint8_t> out(kMagic, kMagic + 4);
  PutLe(out, c.n, 8);
  PutLe(out, c.k, 4);
  PutLe(out, c.inner_id, 1);
  PutLe(out, c.bits.size(), 8);
  const std::vector<uint8_t> packed = BitsToBytes(c.bits);
  out.insert(out.end(), packed.begin(), packed.end());
  return out;
}

CodewordFile DeserializeCodeword(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::kTruncation, "codeword truncated");
  if (!std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw Error(ErrorCode::kBadMagic, "not a codeword (bad magic)");
  }
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorCode::kTruncation, "codeword header truncated");
  }
  CodewordFile c;
  c.n = GetLe(bytes, 4, 8);
  c.k = static_cast<uint32_t>(GetLe(bytes, 12, 4));
  c.inner_id = static_cast<uint8_t>(GetLe(bytes, 16, 1));
  const uint64_t bit_length = GetLe(bytes, 17, 8);
  const uint64_t body = bytes.size() - kHeaderBytes;
  if (bit_length > 8 * body) {
    throw Error(ErrorCode::kTruncation, "codeword body truncated");
  }
  if ((bit_length + 7) / 8 != body) {
    throw Error(ErrorCode::kLengthMismatch, "codeword body has trailing bytes");
  }
  BitString bits = BytesToBits(bytes.subspan(kHeaderBytes));
  bits.resize(bit_length);
  c.bits = std::move(bits);
  return c;
}

}  // namespace dexch
