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

#include "permkiss/oracle.h"

#include <gtest/gtest.h>

#include "permkiss/random.h"
#include "test_util.h"

namespace permkiss {
namespace {

TEST(HungarianTest, IdentityFavoringCost) {
  const Matrix cost = Matrix::Ones(5, 5) - Matrix::Identity(5, 5);
  const OracleResult r = hungarian(cost);
  EXPECT_EQ(r.assignment, Assignment::identity(5));
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_EQ(r.method, OracleMethod::kHungarian);
}

TEST(HungarianTest, TwoByTwo) {
  Matrix cost(2, 2);
  cost << 4.0, 1.0, 2.0, 3.0;
  const OracleResult r = hungarian(cost);
  EXPECT_EQ(r.assignment, Assignment(std::vector<Index>{1, 0}));
  EXPECT_EQ(r.objective, 3.0);
}

TEST(HungarianTest, EmptyAndSingle) {
  EXPECT_EQ(hungarian(Matrix::Constant(1, 1, -2.5)).objective, -2.5);
  EXPECT_THROW(hungarian(Matrix::Zero(2, 3)), ShapeError);
}

TEST(HungarianTest, MatchesBruteForce) {
  Rng rng = make_rng(2026);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 1 + uniform_index(rng, 8);
    const Matrix cost = gaussian_matrix(n, n, rng);
    const OracleResult h = hungarian(cost);
    const OracleResult b = brute_force_lap(cost);
    ASSERT_NEAR(h.objective, b.objective, 1e-9 * (1.0 + std::abs(b.objective))) << trial;
    ASSERT_NEAR(lap_objective(cost, h.assignment), h.objective, 1e-12) << trial;
  }
}

TEST(HungarianTest, IntegerCostsExact) {
  Rng rng = make_rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + uniform_index(rng, 7);
    Matrix cost(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) cost(i, j) = static_cast<double>(uniform_index(rng, 10));
    EXPECT_EQ(hungarian(cost).objective, brute_force_lap(cost).objective) << trial;
  }
}

TEST(BruteForceLapTest, SizeLimitAndTies) {
  EXPECT_THROW(brute_force_lap(Matrix::Zero(10, 10)), OracleSizeError);
  const OracleResult r = brute_force_lap(Matrix::Zero(4, 4));
  EXPECT_EQ(r.assignment, Assignment::identity(4));
  EXPECT_EQ(r.method, OracleMethod::kBruteForce);
}

TEST(BruteForceQapTest, TrivialSizes) {
  const Matrix a1 = Matrix::Constant(1, 1, 2.0), b1 = Matrix::Constant(1, 1, 3.0);
  EXPECT_EQ(brute_force_qap(a1, b1).objective, 6.0);
  Matrix a(2, 2), b(2, 2);
  a << 0, 1, 1, 0;
  b << 0, 5, 7, 0;
  EXPECT_EQ(brute_force_qap(a, b).objective, 12.0);
  Matrix d(2, 2), e(2, 2);
  d << 1, 0, 0, 2;
  e << 10, 0, 0, 1;
  const OracleResult r = brute_force_qap(d, e);
  // Pairing the small weight with the large one: 1 * 10 + 2 * 1.
  EXPECT_EQ(r.objective, 12.0);
  EXPECT_EQ(r.assignment, Assignment::identity(2));
}

TEST(BruteForceQapTest, ObjectiveMatchesKroneckerForm) {
  Rng rng = make_rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + uniform_index(rng, 5);
    const Matrix a = gaussian_matrix(n, n, rng), b = gaussian_matrix(n, n, rng);
    const Assignment p(random_permutation(n, rng));
    EXPECT_NEAR(qap_objective(a, b, p), testing::kronecker_qap(a, b, p.to_matrix(), 0.0), 1e-9);
  }
}

TEST(BruteForceQapTest, OptimumBeatsEveryPermutationSampled) {
  Rng rng = make_rng(3);
  const Matrix a = gaussian_matrix(6, 6, rng), b = gaussian_matrix(6, 6, rng);
  const OracleResult best = brute_force_qap(a, b);
  for (int k = 0; k < 200; ++k) {
    EXPECT_LE(best.objective, qap_objective(a, b, Assignment(random_permutation(6, rng))) + 1e-12);
  }
}

TEST(BruteForceQapTest, SizeLimitAndTies) {
  EXPECT_THROW(brute_force_qap(Matrix::Zero(11, 11), Matrix::Zero(11, 11)), OracleSizeError);
  EXPECT_EQ(brute_force_qap(Matrix::Ones(4, 4), Matrix::Ones(4, 4)).assignment,
            Assignment::identity(4));
  EXPECT_THROW(brute_force_qap(Matrix::Zero(3, 3), Matrix::Zero(4, 4)), ShapeError);
}

TEST(OracleMethodTest, Names) {
  EXPECT_EQ(to_string(OracleMethod::kHungarian), "hungarian");
  EXPECT_EQ(to_string(OracleMethod::kBruteForce), "brute_force");
}

}  // namespace
}  // namespace permkiss
