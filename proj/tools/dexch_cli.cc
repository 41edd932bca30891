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

// Command-line front end: summaries (DXS1), reconstruction, the systematic
// insertion/deletion code (DXC1), mutation, benchmarking and a self test.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dexch/error.h"
#include "dexch/harness.h"
#include "dexch/insdel_code.h"
#include "dexch/params.h"
#include "dexch/recovery.h"
#include "dexch/small_bias.h"
#include "dexch/summary.h"

namespace dexch::cli {
namespace {

// Stable exit codes; documented in README.md.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitFormat = 4,
  kExitDecode = 5,
  kExitCheckMismatch = 6,
  kExitInnerDecode = 7,
  kExitResource = 8,
  kExitSelftest = 9,
};

int ExitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kOutOfRange:
      return kExitUsage;
    case ErrorCode::kBadMagic:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kTruncation:
    case ErrorCode::kLengthMismatch:
    case ErrorCode::kChecksumMismatch:
      return kExitFormat;
    case ErrorCode::kDecodeFailure:
    case ErrorCode::kWitnessSearchExhausted:
      return kExitDecode;
    case ErrorCode::kFinalCheckMismatch:
      return kExitCheckMismatch;
    case ErrorCode::kInnerDecodeFailure:
      return kExitInnerDecode;
    case ErrorCode::kInsufficientEntropy:
    case ErrorCode::kEnumerationTooWide:
    case ErrorCode::kSeedSearchExhausted:
      return kExitResource;
  }
  return kExitInternal;
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string input;
  std::string second_input;
  std::string output;
  uint32_t k = 0;
  std::string scheme = "det";
  std::optional<int> o;
  std::optional<std::string> seed_hex;
  int threads = 1;
  uint64_t budget = 1'000'000;
  bool csv = false;
  // bench
  std::vector<std::string> sizes;
  int trials = 10;
  // mutate
  std::string placement = "uniform";
};

std::vector<uint8_t> ReadFile(const std::string& path) {
  if (path == "-") {
    std::cin >> std::noskipws;
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes to a temporary sibling and renames it into place, so a failed run
// never leaves a partial output file.
void WriteFile(const std::string& path, const std::vector<uint8_t>& bytes) {
  if (path == "-") {
    std::cout.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write standard output");
    return;
  }
  const std::filesystem::path target(path);
  const std::filesystem::path tmp =
      target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename into " + path + ": " + ec.message());
  }
}

uint64_t ParseSeed(const std::string& hex) {
  if (hex.empty() || hex.size() > 16 ||
      hex.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    throw UsageError("--seed takes 1 to 16 hex digits");
  }
  return std::stoull(hex, nullptr, 16);
}

// Seeded from --seed when given, from the OS otherwise.
std::mt19937_64 MakeRng(const Config& c) {
  if (c.seed_hex) return std::mt19937_64(ParseSeed(*c.seed_hex));
  std::random_device dev;
  std::seed_seq seq{dev(), dev(), dev(), dev()};
  return std::mt19937_64(seq);
}

Scheme ParseSchemeOrThrow(const std::string& name) {
  const auto s = ParseScheme(name);
  if (!s) throw UsageError("unknown scheme '" + name + "' (alg1, det, alg2)");
  return *s;
}

void RequireK(const Config& c) {
  if (c.k == 0) throw UsageError("--k must be at least 1");
}

void DescribeParams(const Params& p, uint64_t bytes) {
  std::cerr << "scheme=" << SchemeName(p.scheme) << " n=" << p.n << " k=" << p.k
            << " L=" << p.levels << " o=" << p.o;
  if (p.uses_rs()) {
    std::cerr << " w=" << p.rs_width << " rs_redundancy=" << p.rs_redundancy;
  } else {
    std::cerr << " verify_width=" << p.verify_width << " colors=" << p.color_count;
  }
  std::cerr << " summary_bytes=" << bytes << '\n';
}

std::vector<uint8_t> BitsToFileBytes(const BitString& bits) {
  if (bits.size() % 8 != 0) {
    throw Error(ErrorCode::kLengthMismatch, "result is not a whole number of bytes");
  }
  return BitsToBytes(bits);
}

int CmdSummarize(const Config& c) {
  RequireK(c);
  const Scheme scheme = ParseSchemeOrThrow(c.scheme);
  ParamOverrides overrides;
  overrides.o = c.o;
  const BitString f = BytesToBits(ReadFile(c.input));
  const Params params = DeriveParams(f.size(), c.k, scheme, overrides);
  Summary s;
  if (scheme == Scheme::kDeterministic) {
    DeterministicOptions options;
    options.threads = c.threads;
    SeedSearchStats stats;
    s = BuildSummaryDeterministic(f, params, options, &stats);
    std::cerr << "seed search: accepted candidate " << stats.accepted_index
              << " after " << stats.seeds_tried << " tries\n";
  } else {
    std::mt19937_64 rng = MakeRng(c);
    std::vector<uint8_t> entropy(RequiredEntropyBytes(params));
    for (auto& b : entropy) b = static_cast<uint8_t>(rng());
    s = BuildSummaryRandomized(f, params, entropy);
  }
  const std::vector<uint8_t> bytes = SerializeSummary(s);
  DescribeParams(params, bytes.size());
  WriteFile(c.output, bytes);
  return kExitOk;
}

int CmdReconstruct(const Config& c) {
  const Summary s = DeserializeSummary(ReadFile(c.input));
  const BitString fp = BytesToBits(ReadFile(c.second_input));
  RecoveryLimits limits;
  limits.max_witnesses = c.budget;
  const BitString f = Recover(s, fp, limits);
  WriteFile(c.output, BitsToFileBytes(f));
  std::cerr << "reconstructed " << f.size() / 8 << " bytes ("
            << SchemeName(s.params.scheme) << ")\n";
  return kExitOk;
}

int CmdEncode(const Config& c) {
  RequireK(c);
  CodewordFile cw;
  const BitString x = BytesToBits(ReadFile(c.input));
  DeterministicOptions options;
  options.threads = c.threads;
  cw.n = x.size();
  cw.k = c.k;
  cw.bits = EncodeInsdel(x, c.k, options);
  const auto inner = MakeInnerCode(cw.inner_id, c.k);
  std::cerr << "n=" << cw.n << " k=" << cw.k << " redundancy_bits="
            << cw.bits.size() - cw.n << " inner_radius=" << inner->edit_radius()
            << '\n';
  WriteFile(c.output, SerializeCodeword(cw));
  return kExitOk;
}

int CmdDecode(const Config& c) {
  const CodewordFile cw = DeserializeCodeword(ReadFile(c.input));
  const BitString x = DecodeInsdel(cw.bits, cw.n, cw.k, cw.inner_id);
  WriteFile(c.output, BitsToFileBytes(x));
  std::cerr << "decoded " << x.size() / 8 << " bytes\n";
  return kExitOk;
}

Placement ParsePlacement(const std::string& name) {
  for (Placement p : kAllPlacements) {
    if (PlacementName(p) == name) return p;
  }
  throw UsageError("unknown placement '" + name + "'");
}

// DXC1 inputs get k bit edits on the codeword (optionally placed); other
// files get k byte edits, which is at most 8k bit edits.
int CmdMutate(const Config& c) {
  const std::vector<uint8_t> in = ReadFile(c.input);
  std::mt19937_64 rng = MakeRng(c);
  const Placement placement = ParsePlacement(c.placement);
  const bool is_codeword = in.size() >= 4 && std::equal(in.begin(), in.begin() + 4,
                                                        std::string("DXC1").begin());
  if (is_codeword) {
    CodewordFile cw = DeserializeCodeword(in);
    cw.bits = PlaceEdits(cw.bits, cw.n, c.k, placement, rng).fp;
    WriteFile(c.output, SerializeCodeword(cw));
    std::cerr << "applied " << c.k << " bit edits to the codeword ("
              << PlacementName(placement) << ")\n";
    return kExitOk;
  }
  if (placement != Placement::kUniform) {
    throw UsageError("--placement applies to DXC1 codewords only");
  }
  const Mutation m = Mutate(in, c.k, rng, {}, SymbolMode::kBytes);
  WriteFile(c.output, m.fp);
  std::cerr << "applied " << c.k << " byte edits\n";
  return kExitOk;
}

std::vector<std::pair<uint64_t, uint32_t>> ParseSizes(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<uint64_t, uint32_t>> out;
  for (const std::string& s : specs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw UsageError("--sizes entries are n:k");
    try {
      out.emplace_back(std::stoull(s.substr(0, colon)),
                       static_cast<uint32_t>(std::stoul(s.substr(colon + 1))));
    } catch (const std::logic_error&) {
      throw UsageError("bad --sizes entry '" + s + "'");
    }
  }
  return out;
}

int CmdBench(const Config& c) {
  const Scheme scheme = ParseSchemeOrThrow(c.scheme);
  const auto sizes = ParseSizes(c.sizes);
  ScalingOptions options;
  options.trials = c.trials;
  options.threads = c.threads;
  options.base_seed = c.seed_hex ? ParseSeed(*c.seed_hex) : std::random_device{}();
  options.overrides.o = c.o;
  options.limits.max_witnesses = c.budget;
  const auto rows = BenchSummaryScaling(sizes, scheme, options);
  std::ostringstream out;
  if (c.csv) {
    out << ScalingCsvHeader() << '\n';
    for (const ScalingRow& r : rows) out << ScalingCsvRow(r) << '\n';
  } else {
    for (size_t i = 0; i < sizes.size(); ++i) {
      uint64_t ok = 0, bits = 0, micros = 0;
      for (int t = 0; t < c.trials; ++t) {
        const ScalingRow& r = rows[i * c.trials + t];
        ok += r.success;
        bits = r.summary_bits;
        micros += r.micros;
      }
      out << "n=" << sizes[i].first << " k=" << sizes[i].second
          << " summary_bits=" << bits << " success=" << ok << '/' << c.trials
          << " mean_micros=" << micros / std::max(1, c.trials) << '\n';
    }
  }
  const std::string text = out.str();
  WriteFile(c.output, {text.begin(), text.end()});
  const ScalingFit fit = FitScaling(rows);
  std::cerr << "fitted C in [" << fit.c_min << ", " << fit.c_max
            << "], spread " << fit.spread() << '\n';
  return kExitOk;
}

int CmdSelftest(const Config& c) {
  std::mt19937_64 rng = MakeRng(c);
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cerr << (ok ? "ok   " : "FAIL ") << name << '\n';
    failures += ok ? 0 : 1;
  };
  for (Scheme scheme :
       {Scheme::kAlg1Random, Scheme::kDeterministic, Scheme::kAlg2Optimal}) {
    const uint32_t k = 2;
    BitString f(2048);
    for (auto& b : f) b = rng() & 1;
    const Params p = DeriveParams(f.size(), k, scheme);
    Summary s;
    if (scheme == Scheme::kDeterministic) {
      s = BuildSummaryDeterministic(f, p);
    } else {
      std::vector<uint8_t> entropy(RequiredEntropyBytes(p));
      for (auto& b : entropy) b = static_cast<uint8_t>(rng());
      s = BuildSummaryRandomized(f, p, entropy);
    }
    const Summary parsed = DeserializeSummary(SerializeSummary(s));
    bool ok = parsed == s;
    try {
      ok = ok && Recover(parsed, Mutate(f, k, rng).fp) == f;
    } catch (const Error&) {
      ok = false;
    }
    report(std::string("summary round trip (") + std::string(SchemeName(scheme)) + ")",
           ok);
  }
  {
    BitString x(1024);
    for (auto& b : x) b = rng() & 1;
    const BitString cw = EncodeInsdel(x, 2);
    bool ok = true;
    for (Placement p : kAllPlacements) {
      try {
        ok = ok && DecodeInsdel(PlaceEdits(cw, x.size(), 2, p, rng).fp, x.size(), 2) == x;
      } catch (const Error&) {
        ok = false;
      }
    }
    report("insdel code round trip", ok);
  }
  return failures == 0 ? kExitOk : kExitSelftest;
}

}  // namespace

int Main(int argc, char** argv) {
  Config c;
  CLI::App app{"dexch: single-round document exchange and insdel codes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dexch 0.1.0");

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed_hex, "Hex seed for reproducible randomness");
  };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 256));
  };

  auto* summarize = app.add_subcommand("summarize", "Write a DXS1 summary of a file");
  summarize->add_option("file", c.input, "Input file ('-' for stdin)")->required();
  summarize->add_option("--out", c.output, "Output summary ('-' for stdout)")
      ->required();
  summarize->add_option("--k", c.k, "Edit budget in bits")->required();
  summarize->add_option("--scheme", c.scheme, "alg1, det or alg2")
      ->check(CLI::IsMember({"alg1", "det", "alg2"}));
  summarize->add_option("--o", c.o, "Digest width override");
  add_seed(summarize);
  add_threads(summarize);

  auto* reconstruct =
      app.add_subcommand("reconstruct", "Rebuild a file from its summary and a near copy");
  reconstruct->add_option("summary", c.input, "DXS1 summary")->required();
  reconstruct->add_option("fprime", c.second_input, "The receiver's copy")->required();
  reconstruct->add_option("--out", c.output, "Output file")->required();
  reconstruct->add_option("--budget", c.budget, "Witness budget per level");
  add_threads(reconstruct);

  auto* encode = app.add_subcommand("encode", "Write a DXC1 systematic codeword");
  encode->add_option("file", c.input, "Message file")->required();
  encode->add_option("--out", c.output, "Output codeword")->required();
  encode->add_option("--k", c.k, "Codeword edit budget in bits")->required();
  add_threads(encode);

  auto* decode = app.add_subcommand("decode", "Recover the message from a DXC1 codeword");
  decode->add_option("codeword", c.input, "DXC1 codeword")->required();
  decode->add_option("--out", c.output, "Output file")->required();

  auto* mutate = app.add_subcommand("mutate", "Apply k random edits");
  mutate->add_option("file", c.input, "File or DXC1 codeword")->required();
  mutate->add_option("--out", c.output, "Output file")->required();
  mutate->add_option("--k", c.k, "Number of edits")->required();
  mutate->add_option("--placement", c.placement,
                     "uniform, systematic, redundancy, boundary or burst");
  add_seed(mutate);

  auto* bench = app.add_subcommand("bench", "Summary size and success-rate scaling");
  bench->add_option("--sizes", c.sizes, "Grid of n:k pairs (n in bits)")->required();
  bench->add_option("--scheme", c.scheme, "alg1, det or alg2")
      ->check(CLI::IsMember({"alg1", "det", "alg2"}));
  bench->add_option("--trials", c.trials, "Trials per size")->check(CLI::Range(1, 1000000));
  bench->add_option("--o", c.o, "Digest width override");
  bench->add_option("--budget", c.budget, "Witness budget per level");
  bench->add_option("--out", c.output, "Report file")->default_val("-");
  bench->add_flag("--csv", c.csv, "CSV rows: n,k,scheme,seed,summary_bits,success,micros");
  add_seed(bench);
  add_threads(bench);

  auto* selftest = app.add_subcommand("selftest", "Quick end-to-end checks");
  add_seed(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*summarize) return CmdSummarize(c);
    if (*reconstruct) return CmdReconstruct(c);
    if (*encode) return CmdEncode(c);
    if (*decode) return CmdDecode(c);
    if (*mutate) return CmdMutate(c);
    if (*bench) return CmdBench(c);
    if (*selftest) return CmdSelftest(c);
  } catch (const UsageError& e) {
    std::cerr << "dexch: usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "dexch: io: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "dexch: " << e.what() << '\n';
    return ExitFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "dexch: internal: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace dexch::cli

int main(int argc, char** argv) { return dexch::cli::Main(argc, argv); }
