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

#ifndef PERMKISS_LOWRANK_H_
#define PERMKISS_LOWRANK_H_

#include <cstdint>
#include <span>
#include <vector>

#include "permkiss/common.h"

namespace permkiss {

// Dense materialization refuses n above this unless the caller raises the cap.
inline constexpr Index kDefaultDenseCap = 20000;

// Low-rank permutation representation: P is a nonlinearity applied to
// 2 V W^T (ReLU: max(2<V_i, W_j> - 1, 0); softmax: rowwise softmax of
// 2 alpha <V_i, W_j>).
struct FactorPair {
  Matrix v;
  Matrix w;
  double alpha = 1.0;

  Index n() const { return v.rows(); }
  Index rank() const { return v.cols(); }
  // Throws ShapeError unless V and W have identical shapes.
  void check_shapes() const;
};

// Zero (or numerically zero) row encountered during normalization.
class DegenerateRowError : public Error {
 public:
  DegenerateRowError(const char* which, Index row);
};

// A permutation in index form: row i maps to column target[i].
class Assignment {
 public:
  Assignment() = default;
  // Throws ContractViolation unless `target` is a bijection on [0, n).
  explicit Assignment(std::vector<Index> target);

  static Assignment identity(Index n);
  static bool is_bijection(std::span<const Index> target);

  Index size() const { return static_cast<Index>(target_.size()); }
  Index operator[](Index row) const { return target_[static_cast<std::size_t>(row)]; }
  const std::vector<Index>& target() const { return target_; }

  // P with P(i, target[i]) = 1.
  Matrix to_matrix() const;
  Assignment inverse() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Index> target_;
};

struct Entry {
  Index row = 0;
  Index col = 0;
  friend bool operator==(const Entry&, const Entry&) = default;
};

// A set of (row, col) positions, sorted by row then column, grouped by row.
class EntrySet {
 public:
  EntrySet() = default;
  // Validates ranges and rejects duplicates (ContractViolation). Entries are
  // stored sorted; `order` receives, if non-null, the permutation such that
  // stored entry k came from input position (*order)[k].
  EntrySet(Index rows, Index cols, std::vector<Entry> entries,
           std::vector<std::size_t>* order = nullptr);

  // Every (i, j) in an n x n grid.
  static EntrySet full(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }
  // Positions [row_begin(i), row_end(i)) of row i's entries.
  std::size_t row_begin(Index i) const { return offsets_[static_cast<std::size_t>(i)]; }
  std::size_t row_end(Index i) const { return offsets_[static_cast<std::size_t>(i) + 1]; }
  std::span<const Entry> row(Index i) const;
  bool contains(Index row, Index col) const;
  double density() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> offsets_{0};
};

// Unit-norm rows; throws DegenerateRowError for rows with norm < 1e-300.
Matrix normalize_rows(const Matrix& m, const char* which = "matrix");
FactorPair normalize(FactorPair fp);

// max(2 V W^T - 1, 0). ContractViolation if n > dense_cap.
Matrix relu_permutation(const FactorPair& fp, Index dense_cap = kDefaultDenseCap);

// Rowwise softmax of 2 alpha V W^T with max subtraction.
Matrix softmax_permutation(const FactorPair& fp, Index dense_cap = kDefaultDenseCap);

// In-place rowwise softmax.
void softmax_rows(Matrix& logits);

// Softmax of 2 alpha <V_i, W_j> over the listed columns of each row only;
// result aligned with entries.entries(). Unlisted positions are implicit
// zeros. Every row of the factor pair must have at least one entry.
std::vector<double> evaluate_entries(const FactorPair& fp, const EntrySet& entries);

// Repeatedly takes the global maximum, fixes it to one and clears its row and
// column. Ties go to the lexicographically smallest (row, col).
Assignment greedy_round(const Matrix& p);

// Greedy rounding over a sparse candidate list. Rows left without a free
// listed column are completed greedily on the factor scores <V_i, W_j> of the
// leftover block (or by index order when `fallback` is null).
Assignment greedy_round(const EntrySet& entries, std::span<const double> values,
                        const FactorPair* fallback);

struct Validity {
  bool is_valid = false;
  // Rows plus columns whose binarized sums differ from one.
  std::int64_t hamming = 0;
};

Validity validity_metrics(const Matrix& p, double threshold = 0.5);
Validity validity_metrics(const EntrySet& entries, std::span<const double> values,
                          double threshold = 0.5);

struct RepresentationSize {
  std::int64_t factor_elements = 0;  // 2 n m
  std::int64_t dense_elements = 0;   // n^2
  double ratio() const {
    return static_cast<double>(dense_elements) / static_cast<double>(factor_elements);
  }
};

RepresentationSize representation_size(std::int64_t n, std::int64_t m);

}  // namespace permkiss

#endif  // PERMKISS_LOWRANK_H_
