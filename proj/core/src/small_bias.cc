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

#include "dexch/small_bias.h"

#include <algorithm>
#include <array>
#include <string>

#include "dexch/error.h"
#include "dexch/galois_field.h"

namespace dexch {
namespace {

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back(v >> 8);
}

uint64_t DeinterleaveEven(uint64_t v) {
  uint64_t r = 0;
  for (int i = 0; i < 32; ++i) r |= ((v >> (2 * i)) & 1) << i;
  return r;
}

}  // namespace

int BiasSeed::total_width_bits() const {
  int total = 0;
  for (const auto& lane : lanes) total += lane.width_bits();
  return total;
}

void AppendSeed(std::vector<uint8_t>& out, const BiasSeed& seed) {
  PutU16(out, static_cast<uint16_t>(seed.lanes.size()));
  for (const auto& lane : seed.lanes) {
    PutU16(out, static_cast<uint16_t>(lane.width_bits()));
    BitString bits;
    AppendBitsLsb(bits, lane.x, lane.m);
    AppendBitsLsb(bits, lane.y, lane.m);
    std::vector<uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) bytes[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    }
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
}

BiasSeed ReadSeed(std::span<const uint8_t> in, size_t& offset) {
  auto need = [&](size_t bytes) {
    if (offset + bytes > in.size()) {
      throw Error(ErrorCode::kTruncation, "seed section truncated");
    }
  };
  auto get_u16 = [&]() {
    need(2);
    uint16_t v = static_cast<uint16_t>(in[offset] | (in[offset + 1] << 8));
    offset += 2;
    return v;
  };
  BiasSeed seed;
  const uint16_t lanes = get_u16();
  for (uint16_t l = 0; l < lanes; ++l) {
    const uint16_t width = get_u16();
    if (width % 2 || width > 128) {
      throw Error(ErrorCode::kInvalidArgument, "bad lane width");
    }
    const size_t bytes = (width + 7) / 8;
    need(bytes);
    BitString bits;
    for (size_t i = 0; i < bytes * 8; ++i) {
      bits.push_back((in[offset + i / 8] >> (i % 8)) & 1);
    }
    offset += bytes;
    LaneSeed lane;
    lane.m = width / 2;
    lane.x = ReadBitsLsb(bits, 0, lane.m);
    lane.y = ReadBitsLsb(bits, lane.m, lane.m);
    seed.lanes.push_back(lane);
  }
  return seed;
}

LaneLayout::LaneLayout(const Params& params) : params_(params) {
  lane_count_ =
      params_.scheme == Scheme::kDeterministic ? 1 : params_.levels + 2;
  if (params_.scheme == Scheme::kAlg2Optimal) {
    lane_count_ += params_.levels * params_.verify_stack;
  }
}

int LaneLayout::VerifyLaneBase(int level) const {
  if (level < 1 || level > params_.levels) {
    throw Error(ErrorCode::kOutOfRange, "no verification lanes for level");
  }
  return params_.levels + 2 + (level - 1) * params_.verify_stack;
}

uint64_t LaneLayout::HashBits() const {
  return params_.n_pad * static_cast<uint64_t>(params_.o);
}

Region LaneLayout::HashRegion(int level) const {
  if (params_.scheme == Scheme::kDeterministic) {
    return {0, static_cast<uint64_t>(level) * HashBits(), HashBits()};
  }
  return {level, 0, HashBits()};
}

Region LaneLayout::VerifyRegion(int level) const {
  return {VerifyLaneBase(level), 0,
          params_.BlockCount(level) * params_.o * params_.verify_width,
          params_.verify_stack};
}

Region LaneLayout::ColorRegion(int level) const {
  const Region h = HashRegion(level);
  return {level, h.base + h.length,
          params_.BlockCount(level) * params_.color_bits};
}

Region LaneLayout::ColorVerifyRegion(int level) const {
  const Region v = VerifyRegion(level);
  return {v.lane, v.base + v.length,
          params_.BlockCount(level) * params_.o * params_.color_verify_width,
          params_.verify_stack};
}

Region LaneLayout::FinalRegion() const {
  const uint64_t length = params_.n_pad * Params::kFinalCheckWidth;
  if (params_.scheme == Scheme::kDeterministic) {
    return {0, static_cast<uint64_t>(params_.levels + 1) * HashBits(), length};
  }
  return {params_.levels + 1, 0, length};
}

uint64_t LaneLayout::LaneLength(int lane) const {
  if (params_.scheme == Scheme::kDeterministic) {
    const Region f = FinalRegion();
    return f.base + f.length;
  }
  if (lane == params_.levels + 1) return FinalRegion().length;
  if (params_.scheme == Scheme::kAlg2Optimal) {
    if (lane > params_.levels + 1) {
      const int level = 1 + (lane - params_.levels - 2) / params_.verify_stack;
      const Region cv = ColorVerifyRegion(level);
      return cv.base + cv.length;
    }
    const Region c = ColorRegion(lane);
    return c.base + c.length;
  }
  return HashBits();
}

std::vector<int> LaneLayout::LaneDegrees() const {
  std::vector<int> degrees;
  for (int lane = 0; lane < lane_count_; ++lane) {
    if (lane > params_.levels + 1) {
      degrees.push_back(64);  // verification stacks run at full degree
      continue;
    }
    const int m = CeilLog2(std::max<uint64_t>(2, LaneLength(lane))) +
                  params_.bias_exponent;
    degrees.push_back(std::clamp(m, 2, 64));
  }
  return degrees;
}

size_t RequiredEntropyBytes(const Params& params) {
  size_t total = 0;
  for (int m : LaneLayout(params).LaneDegrees()) total += (2 * m + 7) / 8;
  return total;
}

BiasSeed SampleSeed(const Params& params, std::span<const uint8_t> entropy) {
  const LaneLayout layout(params);
  BiasSeed seed;
  seed.bias_exponent = params.bias_exponent;
  size_t offset = 0;
  for (int m : layout.LaneDegrees()) {
    const size_t bytes = (2 * m + 7) / 8;
    if (offset + bytes > entropy.size()) {
      throw Error(ErrorCode::kInsufficientEntropy,
                  "need at least " + std::to_string(offset + bytes) +
                      " entropy bytes");
    }
    BitString bits;
    for (size_t i = 0; i < bytes * 8; ++i) {
      bits.push_back((entropy[offset + i / 8] >> (i % 8)) & 1);
    }
    offset += bytes;
    LaneSeed lane;
    lane.m = m;
    lane.x = ReadBitsLsb(bits, 0, m);
    lane.y = ReadBitsLsb(bits, m, m);
    seed.lanes.push_back(lane);
  }
  return seed;
}

BiasedStream::BiasedStream(const LaneSeed& seed) : seed_(seed) {}

int BiasedStream::Bit(uint64_t index) const {
  if (seed_.m == 0 || seed_.x == 0) return 0;
  GaloisField field(seed_.m);
  return Parity(seed_.x & field.Pow(seed_.y, index));
}

std::vector<uint64_t> BiasedStream::Packed(uint64_t start,
                                           uint64_t bits) const {
  std::vector<uint64_t> out((bits + 63) / 64 + 1, 0);
  if (seed_.m == 0 || seed_.x == 0 || bits == 0) return out;
  const GaloisField field(seed_.m);
  // Bit i of a 64-bit chunk whose first stream index has power z is
  // <x, y^i z>, a linear function of z; tabulate it per byte of z.
  std::vector<uint64_t> column(seed_.m, 0);
  const ConstantMultiplier times_y(field, seed_.y);
  for (int q = 0; q < seed_.m; ++q) {
    uint64_t v = uint64_t{1} << q;
    for (int i = 0; i < 64; ++i) {
      if (Parity(seed_.x & v)) column[q] |= uint64_t{1} << i;
      v = times_y(v);
    }
  }
  const int bytes = (seed_.m + 7) / 8;
  std::vector<std::array<uint64_t, 256>> table(bytes);
  for (int b = 0; b < bytes; ++b) {
    table[b][0] = 0;
    for (int v = 1; v < 256; ++v) {
      const int low = __builtin_ctz(v);
      const int q = 8 * b + low;
      table[b][v] = table[b][v & (v - 1)] ^ (q < seed_.m ? column[q] : 0);
    }
  }
  const ConstantMultiplier times_y64(field, field.Pow(seed_.y, 64));
  uint64_t z = field.Pow(seed_.y, start);
  for (size_t w = 0; w + 1 < out.size(); ++w) {
    uint64_t word = 0;
    for (int b = 0; b < bytes; ++b) word ^= table[b][(z >> (8 * b)) & 0xff];
    out[w] = word;
    z = times_y64(z);
  }
  return out;
}

std::vector<uint64_t> BiasedStream::Rows(uint64_t start, uint64_t count,
                                         int width) const {
  const size_t words = WordsPerRow(width);
  std::vector<uint64_t> out(count * words, 0);
  if (seed_.m == 0 || seed_.x == 0 || count == 0 || width == 0) return out;
  const std::vector<uint64_t> packed = Packed(start, count * width);
  for (uint64_t r = 0; r < count; ++r) {
    uint64_t* row = out.data() + r * words;
    for (size_t w = 0; w < words; ++w) {
      const uint64_t pos = r * width + 64 * w;
      const int shift = static_cast<int>(pos % 64);
      uint64_t v = packed[pos / 64] >> shift;
      if (shift) v |= packed[pos / 64 + 1] << (64 - shift);
      const int valid = std::min<int>(64, width - static_cast<int>(64 * w));
      row[w] = v & LowMask(valid);
    }
  }
  return out;
}

RandTable::RandTable(const Params& params, BiasSeed seed)
    : params_(params), seed_(std::move(seed)), layout_(params_) {
  if (static_cast<int>(seed_.lanes.size()) != layout_.lane_count()) {
    throw Error(ErrorCode::kInvalidArgument,
                "seed has " + std::to_string(seed_.lanes.size()) +
                    " lanes, parameters need " +
                    std::to_string(layout_.lane_count()));
  }
}

int RandTable::TableBit(uint64_t s, int level, int i) const {
  if (s >= params_.n_pad || level < 0 || level > params_.levels || i < 0 ||
      i >= params_.o) {
    throw Error(ErrorCode::kOutOfRange, "table coordinate out of range");
  }
  const Region r = layout_.HashRegion(level);
  return BiasedStream(seed_.lanes[r.lane])
      .Bit(r.base + s * params_.o + static_cast<uint64_t>(i));
}

std::vector<uint64_t> RandTable::HashRows(int level) const {
  if (level < 0 || level > params_.levels) {
    throw Error(ErrorCode::kOutOfRange, "level out of range");
  }
  return RegionRows(layout_.HashRegion(level), 0, params_.n_pad, params_.o);
}

std::vector<uint64_t> RandTable::RegionRows(const Region& region,
                                            uint64_t first_row, uint64_t count,
                                            int width) const {
  if ((first_row + count) * static_cast<uint64_t>(width) > region.length) {
    throw Error(ErrorCode::kOutOfRange, "region read past its end");
  }
  if (region.stack < 1 ||
      region.lane + region.stack > static_cast<int>(seed_.lanes.size())) {
    throw Error(ErrorCode::kOutOfRange, "region lanes outside the seed");
  }
  const uint64_t start = region.base + first_row * width;
  std::vector<uint64_t> rows =
      BiasedStream(seed_.lanes[region.lane]).Rows(start, count, width);
  for (int s = 1; s < region.stack; ++s) {
    const auto more =
        BiasedStream(seed_.lanes[region.lane + s]).Rows(start, count, width);
    for (size_t i = 0; i < rows.size(); ++i) rows[i] ^= more[i];
  }
  return rows;
}

SupportEnumerator::SupportEnumerator(int m) : m_(m) {
  if (m < 0 || m > 64) {
    throw Error(ErrorCode::kEnumerationTooWide,
                "cannot enumerate lanes of degree " + std::to_string(m));
  }
}

LaneSeed SupportEnumerator::At(uint64_t index) const {
  LaneSeed s;
  s.m = m_;
  s.x = DeinterleaveEven(index);
  s.y = DeinterleaveEven(index >> 1);
  return s;
}

bool SupportEnumerator::Next(LaneSeed& out) {
  if (done_) return false;
  out = At(next_);
  ++next_;
  done_ = count_log2() < 64 ? (next_ >> count_log2()) != 0 : next_ == 0;
  return true;
}

SupportEnumerator EnumerateSupport(const Params& params, int lane,
                                   int cap_bits) {
  const LaneLayout layout(params);
  const auto degrees = layout.LaneDegrees();
  if (lane < 0 || lane >= static_cast<int>(degrees.size())) {
    throw Error(ErrorCode::kOutOfRange, "lane out of range");
  }
  if (2 * degrees[lane] > cap_bits) {
    throw Error(ErrorCode::kEnumerationTooWide,
                "lane width " + std::to_string(2 * degrees[lane]) +
                    " bits exceeds enumeration cap " +
                    std::to_string(cap_bits) +
                    "; shrink n or raise the cap");
  }
  return SupportEnumerator(degrees[lane]);
}

}  // namespace dexch
