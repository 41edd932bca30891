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

#include "dexch/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include "dexch/bits.h"
#include "dexch/error.h"
#include "dexch/small_bias.h"
#include "dexch/summary.h"

namespace dexch {
namespace {

int AlphabetSize(SymbolMode mode) { return mode == SymbolMode::kBits ? 2 : 256; }

uint8_t RandomSymbol(std::mt19937_64& rng, SymbolMode mode) {
  return static_cast<uint8_t>(rng() % AlphabetSize(mode));
}

uint8_t OtherSymbol(uint8_t s, std::mt19937_64& rng, SymbolMode mode) {
  const int q = AlphabetSize(mode);
  return static_cast<uint8_t>((s + 1 + rng() % (q - 1)) % q);
}

EditOp PickOp(std::mt19937_64& rng, const EditWeights& w) {
  std::discrete_distribution<int> pick({w.insert, w.erase, w.substitute});
  return static_cast<EditOp>(pick(rng));
}

uint64_t Uniform(std::mt19937_64& rng, uint64_t lo, uint64_t hi_inclusive) {
  return std::uniform_int_distribution<uint64_t>(lo, hi_inclusive)(rng);
}

void Apply(std::vector<uint8_t>& s, const Edit& e) {
  switch (e.op) {
    case EditOp::kInsert:
      if (e.pos > s.size()) throw Error(ErrorCode::kOutOfRange, "insert past end");
      s.insert(s.begin() + e.pos, e.symbol);
      break;
    case EditOp::kDelete:
      if (e.pos >= s.size()) throw Error(ErrorCode::kOutOfRange, "delete past end");
      s.erase(s.begin() + e.pos);
      break;
    case EditOp::kSubstitute:
      if (e.pos >= s.size()) {
        throw Error(ErrorCode::kOutOfRange, "substitute past end");
      }
      s[e.pos] = e.symbol;
      break;
  }
}

uint64_t SplitMix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ScalingRow RunTrial(uint64_t n, uint32_t k, Scheme scheme, uint64_t seed,
                    const ScalingOptions& options) {
  ScalingRow row;
  row.n = n;
  row.k = k;
  row.scheme = scheme;
  row.seed = seed;
  std::mt19937_64 rng(seed);
  BitString f(n);
  for (auto& b : f) b = rng() & 1;
  const Params params = DeriveParams(n, k, scheme, options.overrides);
  const Mutation m = Mutate(f, k, rng);

  const auto start = std::chrono::steady_clock::now();
  Summary s;
  if (scheme == Scheme::kDeterministic) {
    s = BuildSummaryDeterministic(f, params);
  } else {
    std::vector<uint8_t> entropy(RequiredEntropyBytes(params));
    for (auto& b : entropy) b = static_cast<uint8_t>(rng());
    s = BuildSummaryRandomized(f, params, entropy);
  }
  row.summary_bits = 8 * SerializeSummary(s).size();
  try {
    row.success = Recover(s, m.fp, options.limits) == f;
  } catch (const Error&) {
    row.success = false;
  }
  row.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return row;
}

}  // namespace

std::vector<uint8_t> AsSymbols(std::span<const uint8_t> bytes, SymbolMode mode) {
  if (mode == SymbolMode::kBits) return BytesToBits(bytes);
  return {bytes.begin(), bytes.end()};
}

std::vector<uint8_t> ApplyEdits(std::span<const uint8_t> s,
                                const EditScript& script) {
  std::vector<uint8_t> out(s.begin(), s.end());
  for (const Edit& e : script) Apply(out, e);
  return out;
}

Mutation Mutate(std::span<const uint8_t> f, uint64_t k, std::mt19937_64& rng,
                const EditWeights& weights, SymbolMode mode) {
  return MutateWindow(f, k, 0, f.size(), rng, weights, mode);
}

Mutation MutateWindow(std::span<const uint8_t> f, uint64_t k, uint64_t lo,
                      uint64_t hi, std::mt19937_64& rng,
                      const EditWeights& weights, SymbolMode mode) {
  if (lo > hi || hi > f.size()) {
    throw Error(ErrorCode::kOutOfRange, "edit window outside the string");
  }
  Mutation m;
  m.fp.assign(f.begin(), f.end());
  for (uint64_t i = 0; i < k; ++i) {
    Edit e;
    e.op = hi == lo ? EditOp::kInsert : PickOp(rng, weights);
    if (e.op == EditOp::kInsert) {
      e.pos = Uniform(rng, lo, hi);
      e.symbol = RandomSymbol(rng, mode);
      ++hi;
    } else {
      e.pos = Uniform(rng, lo, hi - 1);
      if (e.op == EditOp::kDelete) {
        --hi;
      } else {
        e.symbol = OtherSymbol(m.fp[e.pos], rng, mode);
      }
    }
    Apply(m.fp, e);
    m.script.push_back(e);
  }
  return m;
}

std::string_view PlacementName(Placement placement) {
  switch (placement) {
    case Placement::kUniform: return "uniform";
    case Placement::kSystematic: return "systematic";
    case Placement::kRedundancy: return "redundancy";
    case Placement::kBoundary: return "boundary";
    case Placement::kBurst: return "burst";
  }
  return "?";
}

Mutation PlaceEdits(std::span<const uint8_t> codeword, uint64_t n, uint64_t k,
                    Placement placement, std::mt19937_64& rng,
                    const EditWeights& weights) {
  const uint64_t len = codeword.size();
  if (n > len) throw Error(ErrorCode::kOutOfRange, "split point past end");
  switch (placement) {
    case Placement::kUniform:
      return MutateWindow(codeword, k, 0, len, rng, weights);
    case Placement::kSystematic:
      return MutateWindow(codeword, k, 0, n, rng, weights);
    case Placement::kRedundancy:
      return MutateWindow(codeword, k, n, len, rng, weights);
    case Placement::kBoundary:
      return MutateWindow(codeword, k, n - std::min(n, k), std::min(len, n + k),
                          rng, weights);
    case Placement::kBurst: {
      Mutation m;
      m.fp.assign(codeword.begin(), codeword.end());
      EditOp op = PickOp(rng, weights);
      if (len < k && op != EditOp::kInsert) op = EditOp::kInsert;
      const uint64_t pos =
          op == EditOp::kInsert ? Uniform(rng, 0, len) : Uniform(rng, 0, len - k);
      for (uint64_t i = 0; i < k; ++i) {
        Edit e{op, op == EditOp::kSubstitute ? pos + i : pos, 0};
        if (op == EditOp::kInsert) e.symbol = RandomSymbol(rng, SymbolMode::kBits);
        if (op == EditOp::kSubstitute) {
          e.symbol = OtherSymbol(m.fp[e.pos], rng, SymbolMode::kBits);
        }
        Apply(m.fp, e);
        m.script.push_back(e);
      }
      return m;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown placement");
}

uint64_t EditDistance(std::span<const uint8_t> a, std::span<const uint8_t> b) {
  std::vector<uint64_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    uint64_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const uint64_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

std::optional<uint64_t> BandedEditDistance(std::span<const uint8_t> a,
                                           std::span<const uint8_t> b,
                                           uint64_t band) {
  const uint64_t n = a.size();
  const uint64_t m = b.size();
  if ((n > m ? n - m : m - n) > band) return std::nullopt;
  const uint64_t cap = band;
  band = std::min(band, std::max(n, m));
  // Cells outside the band are treated as infinite; any path through them
  // costs more than `band` anyway.
  const uint64_t inf = band + 1;
  const uint64_t width = 2 * band + 1;
  // cur[d] holds D(i, i - band + d).
  std::vector<uint64_t> prev(width, inf), cur(width, inf);
  for (uint64_t d = band; d < width && d - band <= m; ++d) prev[d] = d - band;
  for (uint64_t i = 1; i <= n; ++i) {
    std::fill(cur.begin(), cur.end(), inf);
    for (uint64_t d = 0; d < width; ++d) {
      const int64_t j = static_cast<int64_t>(i + d) - static_cast<int64_t>(band);
      if (j < 0 || j > static_cast<int64_t>(m)) continue;
      uint64_t best = inf;
      if (j == 0) {
        best = i;
      } else {
        // D(i-1, j-1) is prev[d]; D(i-1, j) is prev[d+1]; D(i, j-1) is cur[d-1].
        best = prev[d] + (a[i - 1] != b[j - 1]);
        if (d + 1 < width) best = std::min(best, prev[d + 1] + 1);
        if (d > 0) best = std::min(best, cur[d - 1] + 1);
      }
      cur[d] = std::min(best, inf);
    }
    std::swap(prev, cur);
  }
  const uint64_t result = prev[m + band - n];
  if (result > cap) return std::nullopt;
  return result;
}

std::vector<ScalingRow> BenchSummaryScaling(
    std::span<const std::pair<uint64_t, uint32_t>> sizes, Scheme scheme,
    const ScalingOptions& options) {
  struct Job {
    uint64_t n;
    uint32_t k;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& [n, k] : sizes) {
    for (int t = 0; t < options.trials; ++t) {
      const uint64_t seed = SplitMix(SplitMix(SplitMix(options.base_seed) ^ n) ^
                                     (uint64_t{k} << 32 | static_cast<uint32_t>(t)));
      jobs.push_back({n, k, seed});
    }
  }
  std::vector<ScalingRow> rows(jobs.size());
  const size_t threads = static_cast<size_t>(std::max(1, options.threads));
  for (size_t base = 0; base < jobs.size(); base += threads) {
    const size_t batch = std::min(threads, jobs.size() - base);
    if (batch == 1) {
      const Job& j = jobs[base];
      rows[base] = RunTrial(j.n, j.k, scheme, j.seed, options);
      continue;
    }
    std::vector<std::future<ScalingRow>> running;
    for (size_t i = 0; i < batch; ++i) {
      const Job j = jobs[base + i];
      running.push_back(std::async(std::launch::async, [j, scheme, &options] {
        return RunTrial(j.n, j.k, scheme, j.seed, options);
      }));
    }
    for (size_t i = 0; i < batch; ++i) rows[base + i] = running[i].get();
  }
  return rows;
}

std::string ScalingCsvHeader() {
  return "n,k,scheme,seed,summary_bits,success,micros";
}

std::string ScalingCsvRow(const ScalingRow& row) {
  std::ostringstream out;
  out << row.n << ',' << row.k << ',' << SchemeName(row.scheme) << ','
      << std::hex << row.seed << std::dec << ',' << row.summary_bits << ','
      << (row.success ? 1 : 0) << ',' << row.micros;
  return out.str();
}

double TheoreticalScaling(uint64_t n, uint32_t k, Scheme scheme) {
  const double l = std::log2(static_cast<double>(n) / k);
  return scheme == Scheme::kAlg2Optimal ? k * l : k * l * l;
}

ScalingFit FitScaling(std::span<const ScalingRow> rows) {
  ScalingFit fit;
  bool first = true;
  for (const ScalingRow& r : rows) {
    const double c = r.summary_bits / TheoreticalScaling(r.n, r.k, r.scheme);
    fit.c_min = first ? c : std::min(fit.c_min, c);
    fit.c_max = first ? c : std::max(fit.c_max, c);
    first = false;
  }
  return fit;
}

}  // namespace dexch
