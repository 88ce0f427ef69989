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

#include "permkiss/kissing.h"

#include <cmath>
#include <string>

#include <gtest/gtest.h>

namespace permkiss {
namespace {

// Exhaustive pairwise check, independent of max_coherence().
double pairwise_max(const Matrix& x) {
  double best = -1.0;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = i + 1; j < x.rows(); ++j) best = std::max(best, x.row(i).dot(x.row(j)));
  }
  return best;
}

void expect_valid_code(const SphericalCode& code, Index n, int m) {
  ASSERT_EQ(code.points.rows(), n);
  ASSERT_EQ(code.points.cols(), m);
  for (Index i = 0; i < n; ++i) EXPECT_NEAR(code.points.row(i).norm(), 1.0, 1e-12);
  const double coherence = pairwise_max(code.points);
  EXPECT_LE(coherence, 0.5 + 1e-9);
  EXPECT_NEAR(code.max_coherence, coherence, 1e-12);
}

TEST(KissingTableTest, KnownValues) {
  EXPECT_EQ(KissingTable::lower_bound(1), 2);
  EXPECT_EQ(KissingTable::lower_bound(2), 6);
  EXPECT_EQ(KissingTable::lower_bound(3), 12);
  EXPECT_EQ(KissingTable::lower_bound(4), 24);
  EXPECT_EQ(KissingTable::lower_bound(8), 240);
  EXPECT_EQ(KissingTable::lower_bound(24), 196560);
  EXPECT_EQ(KissingTable::max_supported_n(), 196560);
}

TEST(KissingTableTest, StrictlyIncreasing) {
  for (int m = 2; m <= KissingTable::kMaxDimension; ++m) {
    EXPECT_GT(KissingTable::lower_bound(m), KissingTable::lower_bound(m - 1)) << m;
  }
}

TEST(KissingTableTest, RejectsDimensionsOutsideTable) {
  EXPECT_THROW(KissingTable::lower_bound(0), ContractViolation);
  EXPECT_THROW(KissingTable::lower_bound(25), ContractViolation);
}

TEST(RankForTest, Examples) {
  EXPECT_EQ(rank_for(196560), 24);
  EXPECT_EQ(rank_for(6), 2);
  EXPECT_EQ(rank_for(20000), 21);
  EXPECT_EQ(rank_for(2), 1);
  EXPECT_EQ(rank_for(1), 1);
  EXPECT_EQ(rank_for(10), 3);
  EXPECT_EQ(rank_for(100), 7);
  EXPECT_EQ(rank_for(1000), 13);
}

TEST(RankForTest, TableBoundaries) {
  for (int m = 1; m <= KissingTable::kMaxDimension; ++m) {
    const std::int64_t bound = KissingTable::lower_bound(m);
    EXPECT_EQ(rank_for(bound), m);
    if (m < KissingTable::kMaxDimension) EXPECT_EQ(rank_for(bound + 1), m + 1);
  }
}

TEST(RankForTest, BeyondTableNamesLargestSupportedSize) {
  try {
    rank_for(196561);
    FAIL() << "expected SizeBeyondTableError";
  } catch (const SizeBeyondTableError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("size beyond table"), std::string::npos);
    EXPECT_NE(what.find("196560"), std::string::npos);
  }
  EXPECT_THROW(rank_for(0), ContractViolation);
}

TEST(SphericalCodeTest, HexagonIsTight) {
  const SphericalCode code = generate_spherical_code(6, 2, 123);
  expect_valid_code(code, 6, 2);
  EXPECT_NEAR(code.max_coherence, 0.5, 1e-12);
  // Pairwise cosines of a hexagon lie in {0.5, -0.5, -1}.
  for (Index i = 0; i < 6; ++i) {
    for (Index j = i + 1; j < 6; ++j) {
      const double c = code.points.row(i).dot(code.points.row(j));
      const double snapped = std::round(2.0 * c) / 2.0;
      EXPECT_NEAR(c, snapped, 1e-12);
      EXPECT_TRUE(snapped == 0.5 || snapped == -0.5 || snapped == -1.0) << c;
    }
  }
}

TEST(SphericalCodeTest, LineIsAntipodalPair) {
  const SphericalCode code = generate_spherical_code(2, 1, 9);
  EXPECT_NEAR(std::abs(code.points(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(code.points(0, 0), -code.points(1, 0), 1e-15);
  EXPECT_NEAR(code.max_coherence, -1.0, 1e-15);
}

TEST(SphericalCodeTest, SpecialDimensionsReachKissingNumber) {
  for (const auto& [n, m] : {std::pair<Index, int>{2, 1}, {6, 2}, {12, 3}, {24, 4}}) {
    expect_valid_code(generate_spherical_code(n, m, 0), n, m);
  }
}

TEST(SphericalCodeTest, FiftyPointsInSevenDimensions) {
  expect_valid_code(generate_spherical_code(50, 7, 0), 50, 7);
}

TEST(SphericalCodeTest, FullTableUpToDimensionEight) {
  for (int m = 1; m <= 8; ++m) {
    const Index n = KissingTable::lower_bound(m);
    expect_valid_code(generate_spherical_code(n, m, 5), n, m);
  }
}

TEST(SphericalCodeTest, DirectSumsAboveDimensionEight) {
  for (int m = 9; m <= 16; ++m) {
    const Index n = structured_capacity(m);
    ASSERT_GT(n, 240) << m;
    expect_valid_code(generate_spherical_code(n, m, 2), n, m);
  }
}

TEST(SphericalCodeTest, DeterministicInSeed) {
  const SphericalCode a = generate_spherical_code(40, 6, 17);
  const SphericalCode b = generate_spherical_code(40, 6, 17);
  const SphericalCode c = generate_spherical_code(40, 6, 18);
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, c.points);
}

TEST(SphericalCodeTest, RejectsSizesAboveTheBound) {
  EXPECT_THROW(generate_spherical_code(7, 2, 0), ContractViolation);
  EXPECT_THROW(generate_spherical_code(0, 2, 0), ContractViolation);
}

TEST(SphericalCodeTest, FallbackFailureReportsAchievedCoherence) {
  // Above the structured capacity in dimension 9 the optimizer has to work;
  // with a tiny budget it cannot reach the target.
  ASSERT_GT(KissingTable::lower_bound(9), structured_capacity(9));
  CodeOptions tiny;
  tiny.max_steps = 1;
  try {
    generate_spherical_code(KissingTable::lower_bound(9), 9, 0, tiny);
    FAIL() << "expected CodeConstructionError";
  } catch (const CodeConstructionError& e) {
    EXPECT_GT(e.achieved_coherence(), 0.5);
    EXPECT_NE(std::string(e.what()).find("code construction failed"), std::string::npos);
  }
}

TEST(MaxCoherenceTest, FewerThanTwoRows) {
  EXPECT_EQ(max_coherence(Matrix::Ones(1, 3)), -1.0);
}

}  // namespace
}  // namespace permkiss
