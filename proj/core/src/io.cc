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

#include "permkiss/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "permkiss/oracle.h"

namespace permkiss {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kMissingToken: return "missing token";
    case ParseErrorKind::kExtraToken: return "unexpected extra token";
    case ParseErrorKind::kNotInteger: return "not an integer";
    case ParseErrorKind::kNotNumber: return "not a number";
    case ParseErrorKind::kBadSize: return "bad size";
    case ParseErrorKind::kIndexOutOfRange: return "index out of range";
    case ParseErrorKind::kDuplicateEntry: return "duplicate entry";
    case ParseErrorKind::kNotPermutation: return "not a permutation";
    case ParseErrorKind::kMalformedLine: return "malformed line";
    case ParseErrorKind::kBadJson: return "bad json";
  }
  return "parse error";
}

ParseError::ParseError(ParseErrorKind kind, const std::string& detail, std::size_t line,
                       std::size_t column, std::size_t offset)
    : Error(std::string(to_string(kind)) + " at line " + std::to_string(line) +
            ", column " + std::to_string(column) + ": " + detail),
      kind_(kind),
      line_(line),
      column_(column),
      offset_(offset) {}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
         c == ',';
}

struct Token {
  std::string_view text;
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Whitespace-separated tokens with positions. Commas count as whitespace
// (some published .sln files use them).
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  bool next(Token& out) {
    while (pos_ < text_.size() && is_space(text_[pos_])) advance();
    if (pos_ >= text_.size()) return false;
    out.offset = pos_;
    out.line = line_;
    out.column = column_;
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) advance();
    out.text = text_.substr(begin, pos_ - begin);
    return true;
  }

  Token expect(const char* what) {
    Token t;
    if (!next(t)) {
      throw ParseError(ParseErrorKind::kMissingToken, std::string("expected ") + what,
                       line_, column_, pos_);
    }
    return t;
  }

  void expect_end() {
    Token t;
    if (next(t)) {
      throw ParseError(ParseErrorKind::kExtraToken,
                       "'" + std::string(t.text) + "' after the last expected value",
                       t.line, t.column, t.offset);
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

[[noreturn]] void fail(ParseErrorKind kind, const std::string& detail, const Token& t) {
  throw ParseError(kind, detail, t.line, t.column, t.offset);
}

std::int64_t to_integer(const Token& t) {
  std::int64_t v = 0;
  const char* end = t.text.data() + t.text.size();
  const auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    fail(ParseErrorKind::kNotInteger, "'" + std::string(t.text) + "'", t);
  }
  return v;
}

double to_real(const Token& t) {
  double v = 0.0;
  const char* end = t.text.data() + t.text.size();
  const auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(ParseErrorKind::kNotNumber, "'" + std::string(t.text) + "'", t);
  }
  return v;
}

Index read_size(Tokenizer& tok, const char* what) {
  const Token t = tok.expect(what);
  const std::int64_t n = to_integer(t);
  if (n <= 0) fail(ParseErrorKind::kBadSize, "n must be positive, got " + std::to_string(n), t);
  return static_cast<Index>(n);
}

std::string format_real(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

bool is_integral(const Matrix& m) {
  return (m.array() == m.array().round()).all() && m.allFinite();
}

void append_integer_matrix(std::string& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += std::to_string(static_cast<std::int64_t>(m(i, j)));
    }
    out += '\n';
  }
}

}  // namespace

QapInstance parse_qaplib(std::string_view text, std::string name) {
  Tokenizer tok(text);
  const Index n = read_size(tok, "instance size n");
  QapInstance inst;
  inst.name = std::move(name);
  for (Matrix* m : {&inst.a, &inst.b}) {
    m->resize(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        (*m)(i, j) = static_cast<double>(to_integer(tok.expect("matrix entry")));
      }
    }
  }
  tok.expect_end();
  return inst;
}

std::string serialize_qaplib(const QapInstance& instance) {
  if (!is_integral(instance.a) || !is_integral(instance.b)) {
    throw ContractViolation("QAPLIB format holds integer matrices only");
  }
  std::string out = std::to_string(instance.n()) + "\n\n";
  append_integer_matrix(out, instance.a);
  out += '\n';
  append_integer_matrix(out, instance.b);
  return out;
}

SolutionFile parse_solution(std::string_view text) {
  Tokenizer tok(text);
  SolutionFile sol;
  sol.n = read_size(tok, "solution size n");
  sol.objective = to_real(tok.expect("objective"));
  std::vector<Index> target;
  std::vector<bool> seen(static_cast<std::size_t>(sol.n), false);
  for (Index i = 0; i < sol.n; ++i) {
    const Token t = tok.expect("permutation entry");
    const std::int64_t v = to_integer(t);
    if (v < 1 || v > sol.n) {
      fail(ParseErrorKind::kIndexOutOfRange,
           std::to_string(v) + " outside 1.." + std::to_string(sol.n), t);
    }
    if (seen[static_cast<std::size_t>(v - 1)]) {
      fail(ParseErrorKind::kNotPermutation, std::to_string(v) + " repeats", t);
    }
    seen[static_cast<std::size_t>(v - 1)] = true;
    target.push_back(static_cast<Index>(v - 1));
  }
  tok.expect_end();
  sol.permutation = Assignment(std::move(target));
  return sol;
}

std::string serialize_solution(const SolutionFile& solution) {
  std::string out = std::to_string(solution.n) + " " + format_real(solution.objective) + "\n";
  for (Index i = 0; i < solution.permutation.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(solution.permutation[i] + 1);
  }
  out += '\n';
  return out;
}

void attach_solution(QapInstance& instance, const SolutionFile& solution) {
  if (solution.n != instance.n()) {
    throw ContractViolation("solution size " + std::to_string(solution.n) +
                            " does not match instance size " +
                            std::to_string(instance.n()));
  }
  const double tol = 1e-6 * std::max(1.0, std::abs(solution.objective));
  for (const Assignment& p : {solution.permutation, solution.permutation.inverse()}) {
    if (std::abs(qap_objective(instance.a, instance.b, p) - solution.objective) <= tol) {
      instance.optimum = solution.objective;
      instance.optimal_assignment = p;
      return;
    }
  }
  throw ContractViolation("solution objective " + format_real(solution.objective) +
                          " is not reproduced by its permutation on '" + instance.name +
                          "'");
}

QapInstance load_qaplib(const std::filesystem::path& path) {
  QapInstance inst = parse_qaplib(read_text_file(path), path.stem().string());
  std::filesystem::path sln = path;
  sln.replace_extension(".sln");
  if (std::filesystem::exists(sln)) attach_solution(inst, parse_solution(read_text_file(sln)));
  return inst;
}

namespace {

// Lines that are neither blank nor '#' comments, tokenized.
struct Line {
  std::vector<Token> tokens;
  std::size_t line = 0;
  std::size_t offset = 0;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t start = 0, number = 1;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(start, end - start);
    const std::size_t first = raw.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && raw[first] != '#') {
      Line line{{}, number, start};
      Tokenizer tok(raw);
      Token t;
      while (tok.next(t)) {
        t.offset += start;
        t.line = number;
        line.tokens.push_back(t);
      }
      if (line.tokens.empty()) {
        throw ParseError(ParseErrorKind::kMalformedLine, "separators only", number,
                         first + 1, start + first);
      }
      out.push_back(std::move(line));
    }
    if (end == text.size()) break;
    start = end + 1;
    ++number;
  }
  return out;
}

}  // namespace

LapInstance parse_triplets(std::string_view text, std::string name) {
  const std::vector<Line> lines = content_lines(text);
  if (lines.empty()) {
    throw ParseError(ParseErrorKind::kMissingToken, "expected header n", 1, 1, 0);
  }
  const Line& header = lines.front();
  if (header.tokens.size() != 1) {
    fail(ParseErrorKind::kMalformedLine, "header must hold exactly n", header.tokens.front());
  }
  const std::int64_t n = to_integer(header.tokens.front());
  if (n <= 0) fail(ParseErrorKind::kBadSize, "n must be positive", header.tokens.front());

  std::vector<Entry> entries;
  std::vector<double> values;
  std::vector<const Token*> origin;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    if (line.tokens.size() != 3) {
      fail(ParseErrorKind::kMalformedLine, "expected 'i j value'", line.tokens.front());
    }
    const std::int64_t i = to_integer(line.tokens[0]);
    const std::int64_t j = to_integer(line.tokens[1]);
    for (const auto& [v, t] : {std::pair{i, &line.tokens[0]}, std::pair{j, &line.tokens[1]}}) {
      if (v < 0 || v >= n) {
        fail(ParseErrorKind::kIndexOutOfRange,
             std::to_string(v) + " outside 0.." + std::to_string(n - 1), *t);
      }
    }
    entries.push_back({static_cast<Index>(i), static_cast<Index>(j)});
    values.push_back(to_real(line.tokens[2]));
    origin.push_back(&line.tokens[0]);
  }
  // Report the second occurrence of any repeated pair.
  std::vector<std::size_t> idx(entries.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return std::pair(entries[x].row, entries[x].col) < std::pair(entries[y].row, entries[y].col);
  });
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (entries[idx[k]] == entries[idx[k - 1]]) {
      const std::size_t later = std::max(idx[k], idx[k - 1]);
      fail(ParseErrorKind::kDuplicateEntry,
           "pair (" + std::to_string(entries[later].row) + ", " +
               std::to_string(entries[later].col) + ") listed twice",
           *origin[later]);
    }
  }
  std::vector<std::size_t> order;
  EntrySet support(static_cast<Index>(n), static_cast<Index>(n), std::move(entries), &order);
  std::vector<double> sorted(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = values[order[k]];

  LapInstance inst;
  inst.name = std::move(name);
  inst.sparse = SparseCost{std::move(support), std::move(sorted)};
  return inst;
}

std::string serialize_triplets(const SparseCost& cost) {
  std::string out = std::to_string(cost.n()) + "\n";
  const auto list = cost.support.entries();
  for (std::size_t k = 0; k < list.size(); ++k) {
    out += std::to_string(list[k].row) + " " + std::to_string(list[k].col) + " " +
           format_real(cost.values[k]) + "\n";
  }
  return out;
}

Matrix parse_matrix(std::string_view text) {
  Tokenizer tok(text);
  const Index rows = read_size(tok, "row count");
  const Index cols = read_size(tok, "column count");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = to_real(tok.expect("matrix entry"));
  }
  tok.expect_end();
  return m;
}

std::string serialize_matrix(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += format_real(m(i, j));
    }
    out += '\n';
  }
  return out;
}

LapInstance load_lap(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const std::vector<Line> lines = content_lines(text);
  if (!lines.empty() && lines.front().tokens.size() == 2) {
    LapInstance inst;
    inst.name = path.stem().string();
    inst.dense = parse_matrix(text);
    if (inst.dense->rows() != inst.dense->cols()) {
      throw ContractViolation("LAP matrix in " + path.string() + " is not square");
    }
    return inst;
  }
  return parse_triplets(text, path.stem().string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace permkiss
