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

#include "permkiss/lowrank.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace permkiss {

void FactorPair::check_shapes() const {
  if (v.rows() != w.rows() || v.cols() != w.cols()) {
    throw ShapeError("factor pair shape mismatch: V is " +
                     std::to_string(v.rows()) + "x" + std::to_string(v.cols()) +
                     ", W is " + std::to_string(w.rows()) + "x" +
                     std::to_string(w.cols()));
  }
}

DegenerateRowError::DegenerateRowError(const char* which, Index row)
    : Error(std::string("degenerate row: ") + which + " row " +
            std::to_string(row) + " has (near-)zero norm") {}

// ---------------------------------------------------------------------------
// Assignment

Assignment::Assignment(std::vector<Index> target) : target_(std::move(target)) {
  if (!is_bijection(target_)) {
    throw ContractViolation("assignment is not a bijection");
  }
}

Assignment Assignment::identity(Index n) {
  std::vector<Index> t(static_cast<std::size_t>(n));
  std::iota(t.begin(), t.end(), Index{0});
  return Assignment(std::move(t));
}

bool Assignment::is_bijection(std::span<const Index> target) {
  const Index n = static_cast<Index>(target.size());
  std::vector<bool> seen(target.size(), false);
  for (Index j : target) {
    if (j < 0 || j >= n || seen[static_cast<std::size_t>(j)]) return false;
    seen[static_cast<std::size_t>(j)] = true;
  }
  return true;
}

Matrix Assignment::to_matrix() const {
  Matrix p = Matrix::Zero(size(), size());
  for (Index i = 0; i < size(); ++i) p(i, (*this)[i]) = 1.0;
  return p;
}

Assignment Assignment::inverse() const {
  std::vector<Index> inv(target_.size());
  for (Index i = 0; i < size(); ++i) inv[static_cast<std::size_t>((*this)[i])] = i;
  return Assignment(std::move(inv));
}

// ---------------------------------------------------------------------------
// EntrySet

EntrySet::EntrySet(Index rows, Index cols, std::vector<Entry> entries,
                   std::vector<std::size_t>* order)
    : rows_(rows), cols_(cols) {
  std::vector<std::size_t> idx(entries.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (const Entry& e : entries) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
      throw ContractViolation("entry (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) + ") out of range");
    }
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(entries[a].row, entries[a].col) <
           std::tie(entries[b].row, entries[b].col);
  });
  entries_.reserve(entries.size());
  for (std::size_t k : idx) {
    if (!entries_.empty() && entries_.back() == entries[k]) {
      throw ContractViolation("duplicate entry (" +
                              std::to_string(entries[k].row) + ", " +
                              std::to_string(entries[k].col) + ")");
    }
    entries_.push_back(entries[k]);
  }
  offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (const Entry& e : entries_) ++offsets_[static_cast<std::size_t>(e.row) + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  if (order != nullptr) *order = std::move(idx);
}

EntrySet EntrySet::full(Index n) {
  std::vector<Entry> all;
  all.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) all.push_back({i, j});
  }
  return EntrySet(n, n, std::move(all));
}

std::span<const Entry> EntrySet::row(Index i) const {
  return std::span<const Entry>(entries_).subspan(row_begin(i),
                                                  row_end(i) - row_begin(i));
}

bool EntrySet::contains(Index r, Index c) const {
  if (r < 0 || r >= rows_) return false;
  const auto span = row(r);
  return std::binary_search(span.begin(), span.end(), Entry{r, c},
                            [](const Entry& a, const Entry& b) { return a.col < b.col; });
}

double EntrySet::density() const {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  return static_cast<double>(entries_.size()) /
         (static_cast<double>(rows_) * static_cast<double>(cols_));
}

// ---------------------------------------------------------------------------
// Materialization

Matrix normalize_rows(const Matrix& m, const char* which) {
  Matrix out = m;
  for (Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (!(norm >= 1e-300)) throw DegenerateRowError(which, i);
    out.row(i) /= norm;
  }
  return out;
}

FactorPair normalize(FactorPair fp) {
  fp.check_shapes();
  fp.v = normalize_rows(fp.v, "V");
  fp.w = normalize_rows(fp.w, "W");
  return fp;
}

namespace {

void check_dense_cap(Index n, Index cap) {
  if (n > cap) {
    throw ContractViolation("dense materialization refused: n=" +
                            std::to_string(n) + " exceeds cap " +
                            std::to_string(cap));
  }
}

}  // namespace

Matrix relu_permutation(const FactorPair& fp, Index dense_cap) {
  fp.check_shapes();
  check_dense_cap(fp.n(), dense_cap);
  return ((2.0 * fp.v * fp.w.transpose()).array() - 1.0).max(0.0).matrix();
}

void softmax_rows(Matrix& logits) {
  for (Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    logits.row(i) = (logits.row(i).array() - mx).exp().matrix();
    logits.row(i) /= logits.row(i).sum();
  }
}

Matrix softmax_permutation(const FactorPair& fp, Index dense_cap) {
  fp.check_shapes();
  check_dense_cap(fp.n(), dense_cap);
  Matrix p = (2.0 * fp.alpha) * (fp.v * fp.w.transpose());
  softmax_rows(p);
  return p;
}

std::vector<double> evaluate_entries(const FactorPair& fp, const EntrySet& entries) {
  fp.check_shapes();
  if (entries.rows() != fp.n() || entries.cols() != fp.n()) {
    throw ShapeError("entry set shape does not match the factor pair");
  }
  std::vector<double> out(entries.size());
  const double scale = 2.0 * fp.alpha;
  for (Index i = 0; i < fp.n(); ++i) {
    const std::size_t begin = entries.row_begin(i), end = entries.row_end(i);
    if (begin == end) {
      throw ContractViolation("row " + std::to_string(i) + " has no listed entries");
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = begin; k < end; ++k) {
      out[k] = scale * fp.v.row(i).dot(fp.w.row(entries.entries()[k].col));
      mx = std::max(mx, out[k]);
    }
    double total = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      out[k] = std::exp(out[k] - mx);
      total += out[k];
    }
    for (std::size_t k = begin; k < end; ++k) out[k] /= total;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rounding and validity

namespace {

struct Candidate {
  double value;
  Index row;
  Index col;
};

// Descending value, then ascending (row, col).
bool candidate_before(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  return std::tie(a.row, a.col) < std::tie(b.row, b.col);
}

// Greedy selection over candidates; target[i] = -1 for rows left unmatched.
std::vector<Index> greedy_select(std::vector<Candidate> candidates, Index n,
                                 std::vector<bool>& row_used,
                                 std::vector<bool>& col_used) {
  std::sort(candidates.begin(), candidates.end(), candidate_before);
  std::vector<Index> target(static_cast<std::size_t>(n), -1);
  for (const Candidate& c : candidates) {
    const auto r = static_cast<std::size_t>(c.row), k = static_cast<std::size_t>(c.col);
    if (row_used[r] || col_used[k]) continue;
    row_used[r] = col_used[k] = true;
    target[r] = c.col;
  }
  return target;
}

}  // namespace

Assignment greedy_round(const Matrix& p) {
  if (p.rows() != p.cols()) throw ShapeError("greedy_round needs a square matrix");
  const Index n = p.rows();
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) candidates.push_back({p(i, j), i, j});
  }
  std::vector<bool> row_used(static_cast<std::size_t>(n), false);
  std::vector<bool> col_used(static_cast<std::size_t>(n), false);
  return Assignment(greedy_select(std::move(candidates), n, row_used, col_used));
}

Assignment greedy_round(const EntrySet& entries, std::span<const double> values,
                        const FactorPair* fallback) {
  if (values.size() != entries.size()) {
    throw ShapeError("greedy_round: values do not match the entry set");
  }
  if (entries.rows() != entries.cols()) {
    throw ShapeError("greedy_round needs a square entry set");
  }
  const Index n = entries.rows();
  std::vector<Candidate> candidates;
  candidates.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    candidates.push_back({values[k], entries.entries()[k].row, entries.entries()[k].col});
  }
  std::vector<bool> row_used(static_cast<std::size_t>(n), false);
  std::vector<bool> col_used(static_cast<std::size_t>(n), false);
  std::vector<Index> target = greedy_select(std::move(candidates), n, row_used, col_used);

  std::vector<Index> free_rows, free_cols;
  for (Index i = 0; i < n; ++i) {
    if (!row_used[static_cast<std::size_t>(i)]) free_rows.push_back(i);
    if (!col_used[static_cast<std::size_t>(i)]) free_cols.push_back(i);
  }
  if (!free_rows.empty()) {
    std::vector<Candidate> rest;
    rest.reserve(free_rows.size() * free_cols.size());
    for (Index i : free_rows) {
      for (Index j : free_cols) {
        const double score =
            fallback != nullptr ? fallback->v.row(i).dot(fallback->w.row(j)) : 0.0;
        rest.push_back({score, i, j});
      }
    }
    const std::vector<Index> filled = greedy_select(std::move(rest), n, row_used, col_used);
    for (Index i : free_rows) target[static_cast<std::size_t>(i)] = filled[static_cast<std::size_t>(i)];
  }
  return Assignment(std::move(target));
}

namespace {

Validity count_violations(const std::vector<std::int64_t>& row_sums,
                          const std::vector<std::int64_t>& col_sums) {
  Validity out;
  for (std::int64_t s : row_sums) out.hamming += (s != 1);
  for (std::int64_t s : col_sums) out.hamming += (s != 1);
  out.is_valid = out.hamming == 0;
  return out;
}

}  // namespace

Validity validity_metrics(const Matrix& p, double threshold) {
  if (p.rows() != p.cols()) throw ShapeError("validity_metrics needs a square matrix");
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::int64_t> rows(n, 0), cols(n, 0);
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) > threshold) {
        ++rows[static_cast<std::size_t>(i)];
        ++cols[static_cast<std::size_t>(j)];
      }
    }
  }
  return count_violations(rows, cols);
}

Validity validity_metrics(const EntrySet& entries, std::span<const double> values,
                          double threshold) {
  if (values.size() != entries.size()) {
    throw ShapeError("validity_metrics: values do not match the entry set");
  }
  std::vector<std::int64_t> rows(static_cast<std::size_t>(entries.rows()), 0);
  std::vector<std::int64_t> cols(static_cast<std::size_t>(entries.cols()), 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (values[k] > threshold) {
      ++rows[static_cast<std::size_t>(entries.entries()[k].row)];
      ++cols[static_cast<std::size_t>(entries.entries()[k].col)];
    }
  }
  return count_violations(rows, cols);
}

RepresentationSize representation_size(std::int64_t n, std::int64_t m) {
  return {2 * n * m, n * n};
}

}  // namespace permkiss
