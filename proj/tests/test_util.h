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

#ifndef PERMKISS_TESTS_TEST_UTIL_H_
#define PERMKISS_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <functional>

#include "permkiss/common.h"
#include "permkiss/lowrank.h"
#include "permkiss/random.h"

namespace permkiss::testing {

// Unnormalized Gaussian factors (the losses normalize internally).
FactorPair gaussian_factors(Index n, int m, double alpha, std::uint64_t seed);

// [vec(V); vec(W)] and back.
Vector flatten(const Matrix& v, const Matrix& w);
void unflatten(const Vector& x, Matrix& v, Matrix& w);

// p^T (B kron A - beta I) p with p = vec(P) column-major, built explicitly.
double kronecker_qap(const Matrix& a, const Matrix& b, const Matrix& p, double beta);

// ||x||_inf.
double max_abs(const Matrix& m);

}  // namespace permkiss::testing

#endif  // PERMKISS_TESTS_TEST_UTIL_H_
