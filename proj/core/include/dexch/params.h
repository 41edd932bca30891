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

#ifndef DEXCH_PARAMS_H_
#define DEXCH_PARAMS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dexch {

enum class Scheme : uint8_t {
  kAlg1Random = 1,     // o = Theta(log n/k), RS-protected levels, random seed
  kDeterministic = 2,  // as above with a searched seed
  kAlg2Optimal = 3,    // constant o, verification hashes, witness repair
};

std::string_view SchemeName(Scheme scheme);
std::optional<Scheme> ParseScheme(std::string_view name);

struct ParamOverrides {
  std::optional<int> o;
  std::optional<int> c;
  std::optional<int> verify_mult;
  std::optional<int> bias_exponent;
};

// Every quantity a summary and its recovery must agree on. Block counts and
// lengths follow the level hierarchy: level l cuts the padded file into
// 4k * 2^l blocks of 2^(L - l) bits.
struct Params {
  Scheme scheme = Scheme::kAlg1Random;
  uint64_t n = 0;      // original length in bits
  uint32_t k = 0;      // edit budget
  int levels = 0;      // L
  uint64_t n_pad = 0;  // 4k * 2^L
  int o = 0;           // digest width
  int c = 2;
  int bias_exponent = 0;
  int log_n = 1;  // ceil(log2 n), at least 1

  // Reed-Solomon layer (Alg1Random / Deterministic).
  int rs_width = 0;
  int digests_per_symbol = 0;
  uint32_t rs_redundancy = 0;  // 13k

  // Verification layer (Alg2Optimal).
  int verify_mult = 0;   // o'
  int verify_width = 0;  // o' * k
  int color_count = 0;   // 0 when colors are off
  int color_bits = 0;
  int color_verify_width = 0;
  // Independent full-width lanes XORed into every verification stream. One
  // lane of degree m only spans m output dimensions, so wide verification
  // hashes need several.
  int verify_stack = 0;

  static constexpr int kFinalCheckWidth = 64;

  uint64_t BlockLength(int level) const {
    return uint64_t{1} << (levels - level);
  }
  uint64_t BlockCount(int level) const { return uint64_t{4} * k << level; }
  uint64_t RsMessageSymbols(int level) const {
    return (BlockCount(level) + digests_per_symbol - 1) / digests_per_symbol;
  }
  bool uses_rs() const { return scheme != Scheme::kAlg2Optimal; }
  bool uses_colors() const { return color_count > 0; }

  friend bool operator==(const Params&, const Params&) = default;
};

// Throws kInvalidArgument unless 0 < k < n.
Params DeriveParams(uint64_t n, uint32_t k, Scheme scheme,
                    const ParamOverrides& overrides = {});

}  // namespace dexch

#endif  // DEXCH_PARAMS_H_
