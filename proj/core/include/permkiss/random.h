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

#ifndef PERMKISS_RANDOM_H_
#define PERMKISS_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

#include "permkiss/common.h"

namespace permkiss {

// All randomness in the library flows through explicitly seeded engines.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// i.i.d. standard normal entries.
Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);

// Uniform integer in [0, n).
Index uniform_index(Rng& rng, Index n);

// Uniformly random permutation of 0..n-1 (Fisher-Yates).
std::vector<Index> random_permutation(Index n, Rng& rng);

// Haar-distributed orthogonal m x m matrix (QR of a Gaussian matrix with the
// sign of R's diagonal folded into Q).
Matrix random_orthogonal(Index m, Rng& rng);

}  // namespace permkiss

#endif  // PERMKISS_RANDOM_H_
