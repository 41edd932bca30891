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

#include "dexch/params.h"

#include <algorithm>
#include <cmath>

#include "dexch/bits.h"
#include "dexch/error.h"

namespace dexch {

std::string_view SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kAlg1Random: return "alg1";
    case Scheme::kDeterministic: return "det";
    case Scheme::kAlg2Optimal: return "alg2";
  }
  return "?";
}

std::optional<Scheme> ParseScheme(std::string_view name) {
  if (name == "alg1") return Scheme::kAlg1Random;
  if (name == "det") return Scheme::kDeterministic;
  if (name == "alg2") return Scheme::kAlg2Optimal;
  return std::nullopt;
}

Params DeriveParams(uint64_t n, uint32_t k, Scheme scheme,
                    const ParamOverrides& overrides) {
  if (k == 0 || n == 0 || k >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "need 0 < k < n (n=" + std::to_string(n) +
                    ", k=" + std::to_string(k) + ")");
  }
  if (k > (uint32_t{1} << 24)) {
    throw Error(ErrorCode::kInvalidArgument, "k too large");
  }
  Params p;
  p.scheme = scheme;
  p.n = n;
  p.k = k;
  const uint64_t four_k = uint64_t{4} * k;
  p.levels = n <= four_k ? 0 : CeilLog2((n + four_k - 1) / four_k);
  p.n_pad = four_k << p.levels;
  p.log_n = std::max(1, CeilLog2(n));
  p.c = overrides.c.value_or(2);
  if (p.c < 1) throw Error(ErrorCode::kInvalidArgument, "c must be >= 1");

  const double log_n_over_k = std::log2(static_cast<double>(n) / k);
  if (scheme == Scheme::kAlg2Optimal) {
    p.o = overrides.o.value_or(8);
  } else {
    p.o = overrides.o.value_or(static_cast<int>(
        std::ceil(p.c * std::max(1.0, log_n_over_k))));
    p.o = std::min(p.o, 32);
  }
  if (p.o < 1 || p.o > 32) {
    throw Error(ErrorCode::kInvalidArgument, "o must be in [1, 32]");
  }

  if (scheme == Scheme::kAlg2Optimal) {
    p.bias_exponent = overrides.bias_exponent.value_or(
        std::min<int>(64, std::max<int>(32, 2 * p.o * static_cast<int>(std::min<uint32_t>(k, 64)))));
  } else {
    p.bias_exponent = overrides.bias_exponent.value_or(
        std::min(64, 2 * p.c * p.log_n));
  }
  if (p.bias_exponent < 1 || p.bias_exponent > 64) {
    throw Error(ErrorCode::kInvalidArgument, "bias exponent must be in [1, 64]");
  }

  if (p.uses_rs()) {
    p.rs_redundancy = 13 * k;
    for (int w : {8, 12, 16, 24, 32}) {
      if (w < p.o) continue;
      const int g = w / p.o;
      const uint64_t msg = (p.BlockCount(p.levels) + g - 1) / g;
      if (msg + p.rs_redundancy <= LowMask(w)) {
        p.rs_width = w;
        p.digests_per_symbol = g;
        break;
      }
    }
    if (p.rs_width == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no Reed-Solomon symbol width fits n=" + std::to_string(n));
    }
  } else {
    p.verify_mult = overrides.verify_mult.value_or(4 * p.o);
    if (p.verify_mult < 1) {
      throw Error(ErrorCode::kInvalidArgument, "o' must be positive");
    }
    p.verify_width = p.verify_mult * static_cast<int>(k);
    if (k > static_cast<uint32_t>(p.log_n)) {
      p.color_count = static_cast<int>((k + p.log_n - 1) / p.log_n);
      p.color_bits = std::max(1, CeilLog2(p.color_count));
      p.color_verify_width = p.verify_mult * p.log_n;
    }
    const uint64_t stream = p.BlockCount(p.levels) * p.o *
                            static_cast<uint64_t>(p.verify_width +
                                                  p.color_verify_width);
    const int per_lane = 64 - CeilLog2(std::max<uint64_t>(2, stream));
    if (per_lane < 8) {
      throw Error(ErrorCode::kInvalidArgument,
                  "verification streams too long for 64-bit lanes");
    }
    const int target = std::max(p.bias_exponent, p.verify_width);
    p.verify_stack = (target + per_lane - 1) / per_lane;
  }
  return p;
}

}  // namespace dexch
