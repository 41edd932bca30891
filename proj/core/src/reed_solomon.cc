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

#include "dexch/reed_solomon.h"

#include <algorithm>
#include <string>

#include "dexch/error.h"

namespace dexch {

RsCode::RsCode(uint64_t n_code, uint64_t k_code, int width)
    : n_code_(n_code),
      k_code_(k_code),
      field_(std::make_shared<GaloisField>(width)) {
  if (k_code_ > n_code_ || n_code_ > field_->mask()) {
    throw Error(ErrorCode::kInvalidArgument,
                "RS length " + std::to_string(n_code_) + " / " +
                    std::to_string(k_code_) + " invalid for GF(2^" +
                    std::to_string(width) + ")");
  }
  const uint64_t r = r_code();
  generator_.assign(1, 1);
  for (uint64_t i = 1; i <= r; ++i) {
    const uint64_t root = field_->Exp(i);
    std::vector<uint64_t> next(generator_.size() + 1, 0);
    for (size_t j = 0; j < generator_.size(); ++j) {
      next[j + 1] ^= generator_[j];
      next[j] ^= field_->Mul(generator_[j], root);
    }
    generator_ = std::move(next);
  }
  gen_mul_.reserve(r);
  for (uint64_t j = 0; j < r; ++j) gen_mul_.emplace_back(*field_, generator_[j]);
  root_mul_.reserve(r);
  for (uint64_t i = 1; i <= r; ++i) root_mul_.emplace_back(*field_, field_->Exp(i));
}

std::vector<uint64_t> RsCode::EncodeRedundancy(
    std::span<const uint64_t> message) const {
  if (message.size() != k_code_) {
    throw Error(ErrorCode::kLengthMismatch,
                "message has " + std::to_string(message.size()) +
                    " symbols, code expects " + std::to_string(k_code_));
  }
  const uint64_t r = r_code();
  if (r == 0) return {};
  // reg holds the running remainder of m(x) * x^r mod g(x); reg[r-1] is the
  // highest coefficient.
  std::vector<uint64_t> reg(r, 0);
  for (uint64_t m : message) {
    const uint64_t feedback = (m & field_->mask()) ^ reg[r - 1];
    for (uint64_t j = r - 1; j > 0; --j) reg[j] = reg[j - 1] ^ gen_mul_[j](feedback);
    reg[0] = gen_mul_[0](feedback);
  }
  // Parity in transmission order: highest degree first.
  return std::vector<uint64_t>(reg.rbegin(), reg.rend());
}

std::vector<uint64_t> RsCode::Decode(std::span<const uint64_t> received_message,
                                     std::span<const uint64_t> parity) const {
  const uint64_t r = r_code();
  if (received_message.size() != k_code_ || parity.size() != r) {
    throw Error(ErrorCode::kLengthMismatch, "received word has wrong length");
  }
  const GaloisField& f = *field_;
  auto symbol = [&](uint64_t pos) -> uint64_t {
    return pos < k_code_ ? (received_message[pos] & f.mask())
                         : (parity[pos - k_code_] & f.mask());
  };

  // Position pos carries the coefficient of x^(n - 1 - pos).
  std::vector<uint64_t> syn(r, 0);
  bool clean = true;
  for (uint64_t i = 0; i < r; ++i) {
    uint64_t acc = 0;
    const ConstantMultiplier& mul = root_mul_[i];
    for (uint64_t pos = 0; pos < n_code_; ++pos) acc = mul(acc) ^ symbol(pos);
    syn[i] = acc;
    clean = clean && acc == 0;
  }
  std::vector<uint64_t> out(received_message.begin(), received_message.end());
  for (auto& v : out) v &= f.mask();
  if (clean) return out;

  // Berlekamp-Massey.
  std::vector<uint64_t> lambda{1}, prev{1};
  uint64_t errors = 0, shift = 1, prev_disc = 1;
  for (uint64_t step = 0; step < r; ++step) {
    uint64_t disc = syn[step];
    for (uint64_t j = 1; j <= errors && j < lambda.size(); ++j) {
      disc ^= f.Mul(lambda[j], syn[step - j]);
    }
    if (disc == 0) {
      ++shift;
      continue;
    }
    const uint64_t scale = f.Div(disc, prev_disc);
    std::vector<uint64_t> next = lambda;
    if (next.size() < prev.size() + shift) next.resize(prev.size() + shift, 0);
    for (size_t j = 0; j < prev.size(); ++j) next[j + shift] ^= f.Mul(scale, prev[j]);
    if (2 * errors <= step) {
      prev = lambda;
      errors = step + 1 - errors;
      prev_disc = disc;
      shift = 1;
    } else {
      ++shift;
    }
    lambda = std::move(next);
  }
  while (lambda.size() > 1 && lambda.back() == 0) lambda.pop_back();
  const uint64_t degree = lambda.size() - 1;
  if (degree != errors || 2 * degree > r) {
    throw Error(ErrorCode::kDecodeFailure, "too many symbol errors");
  }

  // Chien search: error at degree e iff lambda(x^-e) == 0.
  std::vector<ConstantMultiplier> steps;
  steps.reserve(degree + 1);
  std::vector<uint64_t> terms(lambda);
  for (uint64_t j = 0; j <= degree; ++j) {
    steps.emplace_back(f, f.Exp((f.order() - (j % f.order())) % f.order()));
  }
  std::vector<uint64_t> error_degrees;
  for (uint64_t e = 0; e < n_code_ && error_degrees.size() <= degree; ++e) {
    uint64_t v = 0;
    for (uint64_t j = 0; j <= degree; ++j) v ^= terms[j];
    if (v == 0) error_degrees.push_back(e);
    for (uint64_t j = 1; j <= degree; ++j) terms[j] = steps[j](terms[j]);
  }
  if (error_degrees.size() != degree) {
    throw Error(ErrorCode::kDecodeFailure, "error locator roots out of range");
  }

  // Forney: omega = S(x) * lambda(x) mod x^r.
  std::vector<uint64_t> omega(r, 0);
  for (uint64_t i = 0; i < r; ++i) {
    for (uint64_t j = 0; j <= degree && j <= i; ++j) {
      omega[i] ^= f.Mul(syn[i - j], lambda[j]);
    }
  }
  for (uint64_t e : error_degrees) {
    const uint64_t x_inv = f.Exp((f.order() - (e % f.order())) % f.order());
    uint64_t num = 0, pw = 1;
    for (uint64_t i = 0; i < r; ++i) {
      num ^= f.Mul(omega[i], pw);
      pw = f.Mul(pw, x_inv);
    }
    // Formal derivative keeps odd-degree terms only.
    uint64_t den = 0;
    pw = 1;
    const uint64_t x_inv2 = f.Mul(x_inv, x_inv);
    for (uint64_t j = 1; j <= degree; j += 2) {
      den ^= f.Mul(lambda[j], pw);
      pw = f.Mul(pw, x_inv2);
    }
    if (den == 0) throw Error(ErrorCode::kDecodeFailure, "degenerate locator");
    const uint64_t magnitude = f.Div(num, den);
    const uint64_t pos = n_code_ - 1 - e;
    // Parity is transmitted exactly; a located error there means the
    // received word lies outside the decoding radius.
    if (pos >= k_code_) {
      throw Error(ErrorCode::kDecodeFailure, "error located in parity");
    }
    out[pos] ^= magnitude;
  }
  const auto check = EncodeRedundancy(out);
  if (!std::equal(check.begin(), check.end(), parity.begin())) {
    throw Error(ErrorCode::kDecodeFailure, "correction is not a codeword");
  }
  return out;
}

}  // namespace dexch
