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

#ifndef PERMKISS_ORACLE_H_
#define PERMKISS_ORACLE_H_

#include <string_view>

#include "permkiss/common.h"
#include "permkiss/lowrank.h"

namespace permkiss {

enum class OracleMethod { kHungarian, kBruteForce };

std::string_view to_string(OracleMethod method);

struct OracleResult {
  Assignment assignment;
  double objective = 0.0;
  OracleMethod method = OracleMethod::kHungarian;
};

inline constexpr Index kBruteForceLapLimit = 9;
inline constexpr Index kBruteForceQapLimit = 10;

// Problem too large for an exhaustive oracle.
class OracleSizeError : public Error {
 public:
  OracleSizeError(std::string_view which, Index n, Index limit);
};

// sum_i A[i, p(i)].
double lap_objective(const Matrix& cost, const Assignment& p);

// sum_ij A[i, j] B[p(i), p(j)] = <A, P B P^T>.
double qap_objective(const Matrix& a, const Matrix& b, const Assignment& p);

// Minimum-cost assignment, O(n^3) shortest augmenting paths with potentials.
OracleResult hungarian(const Matrix& cost);

// Exhaustive LAP minimum for n <= 9; lexicographically smallest optimum.
OracleResult brute_force_lap(const Matrix& cost);

// Exhaustive QAP minimum for n <= 10; lexicographically smallest optimum.
OracleResult brute_force_qap(const Matrix& a, const Matrix& b);

}  // namespace permkiss

#endif  // PERMKISS_ORACLE_H_
