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

#ifndef DEXCH_HARNESS_H_
#define DEXCH_HARNESS_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dexch/params.h"
#include "dexch/recovery.h"

namespace dexch {

// Strings here are symbol sequences: one element per bit in bit mode, one
// per byte in byte mode. The core always works in bit mode.
enum class SymbolMode { kBits, kBytes };

std::vector<uint8_t> AsSymbols(std::span<const uint8_t> bytes, SymbolMode mode);

enum class EditOp : uint8_t { kInsert, kDelete, kSubstitute };

// Positions refer to the string as it is when the edit is applied.
struct Edit {
  EditOp op = EditOp::kInsert;
  uint64_t pos = 0;
  uint8_t symbol = 0;  // unused for deletions

  friend bool operator==(const Edit&, const Edit&) = default;
};

using EditScript = std::vector<Edit>;

std::vector<uint8_t> ApplyEdits(std::span<const uint8_t> s,
                                const EditScript& script);

struct EditWeights {
  double insert = 1.0;
  double erase = 1.0;
  double substitute = 1.0;
};

struct Mutation {
  std::vector<uint8_t> fp;
  EditScript script;
};

// Exactly k edits at uniform positions. Substitutions always change the
// symbol. An empty string only admits insertions.
Mutation Mutate(std::span<const uint8_t> f, uint64_t k, std::mt19937_64& rng,
                const EditWeights& weights = {},
                SymbolMode mode = SymbolMode::kBits);

// As Mutate, but every edit lands inside the window [lo, hi) of the
// original string; the window tracks insertions and deletions.
Mutation MutateWindow(std::span<const uint8_t> f, uint64_t k, uint64_t lo,
                      uint64_t hi, std::mt19937_64& rng,
                      const EditWeights& weights = {},
                      SymbolMode mode = SymbolMode::kBits);

// Edit placements against a systematic codeword whose first n symbols are
// the message.
enum class Placement {
  kUniform,     // anywhere
  kSystematic,  // inside the message
  kRedundancy,  // inside the redundancy
  kBoundary,    // within k symbols of the split point
  kBurst,       // k equal operations at one position
};

inline constexpr Placement kAllPlacements[] = {
    Placement::kUniform, Placement::kSystematic, Placement::kRedundancy,
    Placement::kBoundary, Placement::kBurst};

std::string_view PlacementName(Placement placement);

Mutation PlaceEdits(std::span<const uint8_t> codeword, uint64_t n, uint64_t k,
                    Placement placement, std::mt19937_64& rng,
                    const EditWeights& weights = {});

// Levenshtein distance (unit-cost insert, delete, substitute).
uint64_t EditDistance(std::span<const uint8_t> a, std::span<const uint8_t> b);

// Same, restricted to the diagonal band |i - j| <= band; nullopt when the
// distance exceeds the band.
std::optional<uint64_t> BandedEditDistance(std::span<const uint8_t> a,
                                           std::span<const uint8_t> b,
                                           uint64_t band);

// Bench rows: one per (n, k, trial).
struct ScalingRow {
  uint64_t n = 0;
  uint32_t k = 0;
  Scheme scheme = Scheme::kDeterministic;
  uint64_t seed = 0;
  uint64_t summary_bits = 0;
  bool success = false;
  uint64_t micros = 0;
};

struct ScalingOptions {
  int trials = 1;
  uint64_t base_seed = 0;
  int threads = 1;
  ParamOverrides overrides;
  RecoveryLimits limits;
};

// Each trial draws a fresh file, fresh entropy and exactly k fresh edits
// from a generator seeded by (base_seed, n, k, trial), builds the summary
// and recovers. Rows come back ordered by (sizes index, trial).
std::vector<ScalingRow> BenchSummaryScaling(
    std::span<const std::pair<uint64_t, uint32_t>> sizes, Scheme scheme,
    const ScalingOptions& options = {});

// Column order: n,k,scheme,seed,summary_bits,success,micros
std::string ScalingCsvHeader();
std::string ScalingCsvRow(const ScalingRow& row);

// The summary-size model: k*log2(n/k)^2 for the RS schemes and k*log2(n/k)
// for Alg2Optimal.
double TheoreticalScaling(uint64_t n, uint32_t k, Scheme scheme);

struct ScalingFit {
  double c_min = 0;  // smallest summary_bits / model over the rows
  double c_max = 0;  // largest; the fitted C with size <= C * model
  double spread() const { return c_min > 0 ? c_max / c_min : 0; }
};

ScalingFit FitScaling(std::span<const ScalingRow> rows);

}  // namespace dexch

#endif  // DEXCH_HARNESS_H_
