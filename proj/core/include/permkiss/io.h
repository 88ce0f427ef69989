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

#ifndef PERMKISS_IO_H_
#define PERMKISS_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permkiss/common.h"
#include "permkiss/instances.h"
#include "permkiss/report.h"

namespace permkiss {

enum class ParseErrorKind {
  kMissingToken,   // input ended early
  kExtraToken,     // tokens after the expected end
  kNotInteger,
  kNotNumber,
  kBadSize,        // n <= 0 or unusable header
  kIndexOutOfRange,
  kDuplicateEntry,
  kNotPermutation,
  kMalformedLine,
  kBadJson,
};

std::string_view to_string(ParseErrorKind kind);

// Malformed input. Lines and columns are 1-based; offset is the 0-based byte
// position in the text.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, const std::string& detail, std::size_t line,
             std::size_t column, std::size_t offset);
  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  std::size_t offset() const { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
  std::size_t offset_;
};

// QAPLIB instance: n, then n^2 integers of A and n^2 of B, any whitespace.
QapInstance parse_qaplib(std::string_view text, std::string name = "");
// Integer-valued matrices only (ContractViolation otherwise).
std::string serialize_qaplib(const QapInstance& instance);

// QAPLIB .sln: n, objective, then n 1-based indices.
struct SolutionFile {
  Index n = 0;
  double objective = 0.0;
  Assignment permutation;  // 0-based
};

SolutionFile parse_solution(std::string_view text);
std::string serialize_solution(const SolutionFile& solution);

// Stores the solution on the instance. If the permutation does not reproduce
// the stated objective but its inverse does, the inverse is stored. Throws
// ContractViolation when neither matches within 1e-6 relative.
void attach_solution(QapInstance& instance, const SolutionFile& solution);

// Reads a .dat file and, when a sibling .sln exists, attaches it.
QapInstance load_qaplib(const std::filesystem::path& path);

// Sparse LAP triplets: first non-comment line "n", then "i j value" with
// 0-based indices. '#' starts a comment line.
LapInstance parse_triplets(std::string_view text, std::string name = "");
std::string serialize_triplets(const SparseCost& cost);

// "rows cols" then rows*cols reals, row-major.
Matrix parse_matrix(std::string_view text);
std::string serialize_matrix(const Matrix& m);

// A dense LAP from a matrix file or a sparse one from a triplet file, chosen by
// the header (one token: triplets; two: matrix).
LapInstance load_lap(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

inline constexpr int kReportSchemaVersion = 1;

// One JSON object, keys sorted, reals at full precision. Optional fields are
// omitted when absent; wall time is omitted when include_timing is false.
std::string emit_report(const SolveReport& report, bool include_timing = true);
SolveReport parse_report(std::string_view json);

// One report per line.
std::string emit_reports_jsonl(std::span<const SolveReport> reports,
                               bool include_timing = true);
std::vector<SolveReport> parse_reports_jsonl(std::string_view text);

// {"version": ..., "bounds": {"1": 2, ...}}.
std::string kissing_table_json();

}  // namespace permkiss

#endif  // PERMKISS_IO_H_
