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

#ifndef DEXCH_GF2_H_
#define DEXCH_GF2_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "dexch/ip_hash.h"

namespace dexch {

// Incremental Gaussian elimination over GF(2) for systems
// sum_i x_i * column_i = rhs with columns of `rows` bits. Copyable so that a
// shared prefix of columns can be eliminated once and extended many times.
class Gf2Eliminator {
 public:
  explicit Gf2Eliminator(size_t rows);

  size_t rows() const { return rows_; }
  size_t columns() const { return columns_; }

  // Adds the next unknown. Returns false (leaving the system rank deficient)
  // when the column depends on earlier ones.
  bool AddColumn(const Words& column);

  // Unique solution when every added column was independent and rhs lies in
  // their span; x_i is bit i of the result.
  std::optional<std::vector<uint8_t>> Solve(const Words& rhs) const;

 private:
  struct Pivot {
    Words vec;
    Words comb;  // which columns were combined into vec
  };
  void Reduce(Words& vec, Words& comb) const;

  size_t rows_;
  size_t columns_ = 0;
  bool deficient_ = false;
  std::vector<int32_t> pivot_of_bit_;  // row bit -> index into pivots_
  std::vector<Pivot> pivots_;
};

}  // namespace dexch

#endif  // DEXCH_GF2_H_
