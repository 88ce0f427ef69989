// Copyright 2026 The permkiss Authors. All Rights Reserved.
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

#ifndef PERMKISS_KISSING_H_
#define PERMKISS_KISSING_H_

#include <array>
#include <cstdint>
#include <string_view>

#include "permkiss/common.h"

namespace permkiss {

// Best-known lower bounds on the kissing number for dimensions 1..24.
//
// Lower bounds never overstate how many rows a rank-m factorization can
// represent exactly, so they are safe to select ranks from. Sources per entry:
//   1-4    exact (trivial, hexagon, Schuette/van der Waerden, Musin)
//   5-7    D5, E6, E7 root systems
//   8      E8 root system (exact, Odlyzko-Sloane / Levenshtein)
//   9-15   laminated lattices and non-lattice codes (Conway-Sloane table)
//   16     Barnes-Wall lattice
//   17-23  laminated lattices (Conway-Sloane; 17-21 improved codes)
//   24     Leech lattice (exact)
class KissingTable {
 public:
  static constexpr int kMaxDimension = 24;
  static constexpr std::string_view kVersion = "kissing-lower-bounds/1";

  // Lower bound on kappa(m). Throws ContractViolation outside 1..24.
  static std::int64_t lower_bound(int m);

  // The largest n any stored dimension can represent.
  static std::int64_t max_supported_n() { return kLowerBounds.back(); }

  static constexpr std::array<std::int64_t, kMaxDimension> kLowerBounds = {
      2,     6,     12,    24,    40,    72,    126,   240,
      306,   500,   582,   840,   1154,  1606,  2564,  4320,
      5346,  7398,  10668, 17400, 27720, 49896, 93150, 196560};
};

// n is larger than the table can certify.
class SizeBeyondTableError : public Error {
 public:
  explicit SizeBeyondTableError(std::int64_t n);
};

// Smallest m with KissingTable::lower_bound(m) >= n.
int rank_for(std::int64_t n);

// n unit rows in R^m.
struct SphericalCode {
  Matrix points;
  double max_coherence = 0.0;
};

// The spherical-code generator missed the coherence target.
class CodeConstructionError : public Error {
 public:
  CodeConstructionError(Index n, int m, double achieved);
  double achieved_coherence() const { return achieved_; }

 private:
  double achieved_;
};

struct CodeOptions {
  int max_steps = 50000;
  double tolerance = 1e-9;
};

// Largest pairwise inner product between distinct rows (exhaustive, O(n^2 m)).
// With fewer than two rows there are no pairs and the result is -1.
double max_coherence(const Matrix& points);

// Number of unit vectors in R^m the structured (root-system) construction
// provides with coherence exactly 1/2.
std::int64_t structured_capacity(int m);

// Builds n unit vectors in R^m whose pairwise inner products are <= 1/2 +
// options.tolerance. Deterministic in seed.
//
// When n fits in structured_capacity(m) the code is a seeded random subset of
// a root-system configuration (A1, A2, D3, D4, D5, E6, E7, E8, and orthogonal
// direct sums of those above dimension 8) under a seeded random rotation.
// Otherwise the points come from minimizing a log-sum-exp surrogate of the
// largest pairwise inner product with annealed sharpness and row
// re-normalization after each step. The result is verified exhaustively before
// it is returned; CodeConstructionError reports the best coherence seen.
SphericalCode generate_spherical_code(Index n, int m, std::uint64_t seed,
                                      const CodeOptions& options = {});

}  // namespace permkiss

#endif  // PERMKISS_KISSING_H_
