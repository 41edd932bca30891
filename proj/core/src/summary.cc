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

#include "dexch/summary.h"

#include <zlib.h>

#include <algorithm>
#include <future>
#include <string>

#include "dexch/error.h"
#include "dexch/matchings.h"

namespace dexch {
namespace {

constexpr char kMagic[4] = {'D', 'X', 'S', '1'};
// magic, version, scheme, n, k, o, L, w, poly, c, bias, o', total length
constexpr size_t kHeaderBytes = 4 + 2 + 1 + 8 + 4 + 1 + 1 + 1 + 4 + 1 + 1 + 2 + 8;
constexpr size_t kTotalLengthOffset = kHeaderBytes - 8;
constexpr uint64_t kExhaustiveDetectorLimit = uint64_t{1} << 12;

class ByteWriter {
 public:
  void U8(uint64_t v) { out_.push_back(static_cast<uint8_t>(v)); }
  void U16(uint64_t v) { Le(v, 2); }
  void U32(uint64_t v) { Le(v, 4); }
  void U64(uint64_t v) { Le(v, 8); }
  void Raw(std::span<const uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  // Packs fixed-width fields LSB-first into ceil(bits / 8) bytes.
  void Fields(std::span<const uint64_t> values, int width) {
    BitString bits;
    for (uint64_t v : values) AppendBitsLsb(bits, v, width);
    PackedBits(bits);
  }
  void PackedBits(const BitString& bits) {
    std::vector<uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) bytes[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    }
    Raw(bytes);
  }
  std::vector<uint8_t>& bytes() { return out_; }

 private:
  void Le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> out_;
};

class ByteReader {
 public:
  ByteReader(std::span<const uint8_t> in, size_t offset)
      : in_(in), offset_(offset) {}

  uint64_t U8() { return Le(1); }
  uint64_t U16() { return Le(2); }
  uint64_t U32() { return Le(4); }
  uint64_t U64() { return Le(8); }
  std::span<const uint8_t> Take(size_t n) {
    Need(n);
    auto s = in_.subspan(offset_, n);
    offset_ += n;
    return s;
  }
  std::vector<uint64_t> Fields(size_t count, int width) {
    const auto bytes = Take((count * width + 7) / 8);
    return UnpackFields(bytes, count, width);
  }
  static std::vector<uint64_t> UnpackFields(std::span<const uint8_t> bytes,
                                            size_t count, int width) {
    std::vector<uint64_t> out(count, 0);
    for (size_t i = 0; i < count; ++i) {
      for (int b = 0; b < width; ++b) {
        const size_t bit = i * width + b;
        if ((bytes[bit / 8] >> (bit % 8)) & 1) out[i] |= uint64_t{1} << b;
      }
    }
    return out;
  }
  size_t offset() const { return offset_; }
  size_t& offset_ref() { return offset_; }

 private:
  void Need(size_t n) const {
    if (offset_ + n > in_.size()) {
      throw Error(ErrorCode::kTruncation, "summary truncated");
    }
  }
  uint64_t Le(int n) {
    Need(n);
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= uint64_t{in_[offset_ + i]} << (8 * i);
    offset_ += n;
    return v;
  }
  std::span<const uint8_t> in_;
  size_t offset_;
};

uint32_t Crc32(std::span<const uint8_t> bytes) {
  return static_cast<uint32_t>(
      crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

// Words of a `width`-bit hash as fixed 64-bit fields, trimmed to width.
void PutWords(BitString& bits, const Words& w, int width) {
  for (int i = 0; i < width; ++i) bits.push_back((w[i / 64] >> (i % 64)) & 1);
}

Words GetWords(std::span<const uint8_t> bytes, size_t bit_offset, int width) {
  Words w(BiasedStream::WordsPerRow(width), 0);
  for (int i = 0; i < width; ++i) {
    const size_t bit = bit_offset + i;
    if ((bytes[bit / 8] >> (bit % 8)) & 1) w[i / 64] |= uint64_t{1} << (i % 64);
  }
  return w;
}

size_t AlgTwoPayloadBits(const Params& p) {
  return static_cast<size_t>(p.verify_width) +
         static_cast<size_t>(p.color_count) * p.color_verify_width;
}

}  // namespace

BitString PadFile(std::span<const uint8_t> f, const Params& params) {
  if (f.size() != params.n) {
    throw Error(ErrorCode::kLengthMismatch,
                "file has " + std::to_string(f.size()) + " bits, expected " +
                    std::to_string(params.n));
  }
  BitString out(f.begin(), f.end());
  out.resize(params.n_pad, 0);
  return out;
}

std::vector<uint64_t> PackDigests(std::span<const HashDigest> digests,
                                  const Params& params) {
  const int g = params.digests_per_symbol;
  std::vector<uint64_t> symbols((digests.size() + g - 1) / g, 0);
  for (size_t i = 0; i < digests.size(); ++i) {
    symbols[i / g] |= (digests[i] & LowMask(params.o)) << ((i % g) * params.o);
  }
  return symbols;
}

std::vector<HashDigest> UnpackDigests(std::span<const uint64_t> symbols,
                                      uint64_t count, const Params& params) {
  const int g = params.digests_per_symbol;
  std::vector<HashDigest> out(count);
  for (uint64_t i = 0; i < count; ++i) {
    out[i] = (symbols[i / g] >> ((i % g) * params.o)) & LowMask(params.o);
  }
  return out;
}

RsCode LevelCode(const Params& params, int level) {
  const uint64_t msg = params.RsMessageSymbols(level);
  return RsCode(msg + params.rs_redundancy, msg, params.rs_width);
}

std::vector<int> ColorAssignment(const RandTable& table, int level) {
  const Params& p = table.params();
  std::vector<int> colors(p.BlockCount(level), 0);
  if (!p.uses_colors()) return colors;
  const auto rows = table.RegionRows(table.layout().ColorRegion(level), 0,
                                     colors.size(), p.color_bits);
  for (size_t j = 0; j < colors.size(); ++j) {
    colors[j] = static_cast<int>(rows[j] % p.color_count);
  }
  return colors;
}

Summary BuildSummaryWithSeed(std::span<const uint8_t> f, const Params& params,
                             const BiasSeed& seed) {
  const BitString fp = PadFile(f, params);
  Summary s;
  s.params = params;
  s.seed = seed;
  s.seed.bias_exponent = params.bias_exponent;
  const RandTable table(params, s.seed);
  for (int level = 0; level <= params.levels; ++level) {
    const HashVector h = HashLevel(fp, level, table);
    if (level == 0) {
      s.level0 = h;
      continue;
    }
    if (params.uses_rs()) {
      s.rs_parity.push_back(
          LevelCode(params, level).EncodeRedundancy(PackDigests(h.digests, params)));
      continue;
    }
    const uint64_t count = params.BlockCount(level);
    s.verify.push_back(DigestStringHasher(table, table.layout().VerifyRegion(level),
                                          count, params.o, params.verify_width)
                           .Hash(h.digests));
    auto& classes = s.color_verify.emplace_back();
    if (params.uses_colors()) {
      const auto colors = ColorAssignment(table, level);
      const DigestStringHasher hasher(table,
                                      table.layout().ColorVerifyRegion(level),
                                      count, params.o, params.color_verify_width);
      for (int c = 0; c < params.color_count; ++c) {
        std::vector<uint64_t> positions;
        for (uint64_t j = 0; j < count; ++j) {
          if (colors[j] == c) positions.push_back(j);
        }
        classes.push_back(hasher.HashSubset(h.digests, positions));
      }
    }
  }
  s.final_check = FinalCheckHash(fp, table);
  return s;
}

Summary BuildSummaryRandomized(std::span<const uint8_t> f, const Params& params,
                               std::span<const uint8_t> entropy) {
  if (params.scheme == Scheme::kDeterministic) {
    throw Error(ErrorCode::kInvalidArgument,
                "deterministic summaries do not take entropy");
  }
  return BuildSummaryWithSeed(f, params, SampleSeed(params, entropy));
}

bool SeedIsGood(std::span<const uint8_t> f_padded, const RandTable& table) {
  const Params& p = table.params();
  const std::optional<uint64_t> band =
      p.n_pad <= kExhaustiveDetectorLimit
          ? std::nullopt
          : std::optional<uint64_t>(2 * uint64_t{p.k});
  for (int level = 0; level <= p.levels; ++level) {
    if (p.BlockLength(level) <= static_cast<uint64_t>(p.o)) continue;
    if (DetectKBadSelfMatching(f_padded, level, p.k, table.HashRows(level), p,
                               band)) {
      return false;
    }
  }
  return true;
}

BiasSeed DeterministicCandidate(const Params& params, uint64_t index) {
  const LaneLayout layout(params);
  BiasSeed seed;
  seed.bias_exponent = params.bias_exponent;
  seed.lanes.push_back(SupportEnumerator(layout.LaneDegrees().at(0)).At(index));
  return seed;
}

Summary BuildSummaryDeterministic(std::span<const uint8_t> f,
                                  const Params& params,
                                  const DeterministicOptions& options,
                                  SeedSearchStats* stats) {
  if (params.scheme != Scheme::kDeterministic) {
    throw Error(ErrorCode::kInvalidArgument,
                "deterministic search needs the deterministic scheme");
  }
  if (options.cap_bits < 0 || options.cap_bits > 40) {
    throw Error(ErrorCode::kInvalidArgument, "enumeration cap out of range");
  }
  const BitString fp = PadFile(f, params);
  const int m = LaneLayout(params).LaneDegrees().at(0);
  const uint64_t support_log2 = 2 * static_cast<uint64_t>(m);
  const uint64_t limit =
      support_log2 < static_cast<uint64_t>(options.cap_bits)
          ? uint64_t{1} << support_log2
          : uint64_t{1} << options.cap_bits;
  const uint64_t threads = std::max(1, options.threads);
  auto good = [&](uint64_t index) {
    return SeedIsGood(fp, RandTable(params, DeterministicCandidate(params, index)));
  };
  for (uint64_t base = 0; base < limit; base += threads) {
    const uint64_t batch = std::min(threads, limit - base);
    std::vector<char> ok(batch, 0);
    if (batch == 1) {
      ok[0] = good(base);
    } else {
      std::vector<std::future<bool>> jobs;
      for (uint64_t i = 0; i < batch; ++i) {
        jobs.push_back(std::async(std::launch::async, good, base + i));
      }
      for (uint64_t i = 0; i < batch; ++i) ok[i] = jobs[i].get();
    }
    for (uint64_t i = 0; i < batch; ++i) {
      if (!ok[i]) continue;
      if (stats) {
        stats->seeds_tried = base + i + 1;
        stats->accepted_index = base + i;
      }
      return BuildSummaryWithSeed(f, params,
                                  DeterministicCandidate(params, base + i));
    }
  }
  if (stats) stats->seeds_tried = limit;
  throw Error(ErrorCode::kSeedSearchExhausted,
              "no seed among the first " + std::to_string(limit) +
                  " candidates avoids bad self-matchings; raise o or c");
}

std::vector<uint8_t> SerializeSummary(const Summary& s) {
  const Params& p = s.params;
  ByteWriter w;
  w.Raw(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(kMagic), 4));
  w.U16(kSummaryVersion);
  w.U8(static_cast<uint8_t>(p.scheme));
  w.U64(p.n);
  w.U32(p.k);
  w.U8(p.o);
  w.U8(p.levels);
  w.U8(p.rs_width);
  w.U32(p.uses_rs() ? PrimitivePolynomialLow(p.rs_width) : 0);
  w.U8(p.c);
  w.U8(p.bias_exponent);
  w.U16(p.verify_mult);
  w.U64(0);  // total length, patched below
  AppendSeed(w.bytes(), s.seed);
  w.Fields(s.level0.digests, p.o);
  for (int level = 1; level <= p.levels; ++level) {
    BitString bits;
    if (p.uses_rs()) {
      for (uint64_t v : s.rs_parity.at(level - 1)) {
        AppendBitsLsb(bits, v, p.rs_width);
      }
    } else {
      PutWords(bits, s.verify.at(level - 1), p.verify_width);
      for (const Words& c : s.color_verify.at(level - 1)) {
        PutWords(bits, c, p.color_verify_width);
      }
    }
    w.U32((bits.size() + 7) / 8);
    w.PackedBits(bits);
  }
  w.U64(s.final_check);
  std::vector<uint8_t>& out = w.bytes();
  const uint64_t total = out.size() + 4;
  for (int i = 0; i < 8; ++i) {
    out[kTotalLengthOffset + i] = static_cast<uint8_t>(total >> (8 * i));
  }
  const uint32_t crc = Crc32(out);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(crc >> (8 * i)));
  return out;
}

uint64_t SerializedSummaryBytes(const Params& p) {
  std::vector<int> degrees = LaneLayout(p).LaneDegrees();
  if (p.scheme == Scheme::kDeterministic) degrees.resize(1);
  uint64_t total = kHeaderBytes + 2;
  for (int m : degrees) total += 2 + (2 * static_cast<uint64_t>(m) + 7) / 8;
  total += (p.BlockCount(0) * p.o + 7) / 8;
  for (int level = 1; level <= p.levels; ++level) {
    const uint64_t bits =
        p.uses_rs() ? uint64_t{p.rs_redundancy} * p.rs_width
                    : p.verify_width + uint64_t{p.color_verify_width} *
                                           (p.uses_colors() ? p.color_count : 0);
    total += 4 + (bits + 7) / 8;
  }
  return total + 8 + 4;
}

Summary DeserializeSummary(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    if (bytes.size() < 4) throw Error(ErrorCode::kTruncation, "summary truncated");
    throw Error(ErrorCode::kBadMagic, "not a summary (bad magic)");
  }
  ByteReader r(bytes, 4);
  const uint64_t version = r.U16();
  if (version != kSummaryVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "summary version " + std::to_string(version) + " unsupported");
  }
  const uint64_t scheme_raw = r.U8();
  const uint64_t n = r.U64();
  const uint64_t k = r.U32();
  const int o = static_cast<int>(r.U8());
  const int levels = static_cast<int>(r.U8());
  const int rs_width = static_cast<int>(r.U8());
  const uint64_t poly = r.U32();
  const int c = static_cast<int>(r.U8());
  const int bias = static_cast<int>(r.U8());
  const int verify_mult = static_cast<int>(r.U16());
  const uint64_t total = r.U64();
  if (total > bytes.size()) throw Error(ErrorCode::kTruncation, "summary truncated");
  if (total < bytes.size()) {
    throw Error(ErrorCode::kLengthMismatch, "trailing bytes after summary");
  }
  const uint32_t stored_crc =
      static_cast<uint32_t>(bytes[total - 4] | (bytes[total - 3] << 8) |
                            (bytes[total - 2] << 16) |
                            (uint32_t{bytes[total - 1]} << 24));
  if (Crc32(bytes.first(total - 4)) != stored_crc) {
    throw Error(ErrorCode::kChecksumMismatch, "summary checksum mismatch");
  }
  if (scheme_raw < 1 || scheme_raw > 3) {
    throw Error(ErrorCode::kInvalidArgument, "unknown scheme");
  }
  ParamOverrides ov;
  ov.o = o;
  ov.c = c;
  ov.bias_exponent = bias;
  if (scheme_raw == static_cast<uint64_t>(Scheme::kAlg2Optimal)) {
    ov.verify_mult = verify_mult;
  }
  Summary s;
  s.params = DeriveParams(n, static_cast<uint32_t>(k),
                          static_cast<Scheme>(scheme_raw), ov);
  const Params& p = s.params;
  if (p.levels != levels || p.rs_width != rs_width ||
      (p.uses_rs() && poly != PrimitivePolynomialLow(p.rs_width))) {
    throw Error(ErrorCode::kInvalidArgument, "header fields inconsistent");
  }
  s.seed = ReadSeed(bytes.first(total - 4), r.offset_ref());
  s.seed.bias_exponent = p.bias_exponent;
  const auto degrees = LaneLayout(p).LaneDegrees();
  if (s.seed.lanes.size() != degrees.size()) {
    throw Error(ErrorCode::kInvalidArgument, "seed lane count mismatch");
  }
  for (size_t i = 0; i < degrees.size(); ++i) {
    if (s.seed.lanes[i].m != degrees[i]) {
      throw Error(ErrorCode::kInvalidArgument, "seed lane width mismatch");
    }
  }
  s.level0.level = 0;
  s.level0.width = p.o;
  s.level0.digests = r.Fields(p.BlockCount(0), p.o);
  for (int level = 1; level <= p.levels; ++level) {
    const uint64_t len = r.U32();
    const auto payload = r.Take(len);
    if (p.uses_rs()) {
      if (len != (p.rs_redundancy * p.rs_width + 7) / 8) {
        throw Error(ErrorCode::kLengthMismatch, "parity section size");
      }
      s.rs_parity.push_back(
          ByteReader::UnpackFields(payload, p.rs_redundancy, p.rs_width));
    } else {
      if (len != (AlgTwoPayloadBits(p) + 7) / 8) {
        throw Error(ErrorCode::kLengthMismatch, "verification section size");
      }
      s.verify.push_back(GetWords(payload, 0, p.verify_width));
      auto& classes = s.color_verify.emplace_back();
      for (int col = 0; col < p.color_count; ++col) {
        classes.push_back(GetWords(
            payload, p.verify_width + size_t(col) * p.color_verify_width,
            p.color_verify_width));
      }
    }
  }
  s.final_check = r.U64();
  if (r.offset() + 4 != total) {
    throw Error(ErrorCode::kLengthMismatch, "summary length mismatch");
  }
  return s;
}

}  // namespace dexch
