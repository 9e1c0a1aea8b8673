// Copyright 2026 The trl Authors
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

#pragma once

// Dense matrices over a FieldSpec and exact Gaussian elimination.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trl/field.hpp"

namespace trl {

class Matrix {
 public:
  Matrix(FieldSpec fs, std::size_t rows, std::size_t cols)
      : fs_(std::move(fs)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix from_rows(const FieldSpec& fs, std::size_t cols,
                          const std::vector<std::vector<FieldElem>>& rows) {
    Matrix m(fs, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::require(rows[i].size() == cols, "matrix row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) {
        fs.check(rows[i][j]);
        m.at(i, j) = rows[i][j];
      }
    }
    return m;
  }

  const FieldSpec& field() const { return fs_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  FieldElem& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  FieldElem at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::span<const FieldElem> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }
  std::span<FieldElem> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
  const std::vector<FieldElem>& data() const { return a_; }

  Matrix transpose() const {
    Matrix t(fs_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  bool operator==(const Matrix& o) const {
    return fs_ == o.fs_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  FieldSpec fs_;
  std::size_t rows_, cols_;
  std::vector<FieldElem> a_;
};

/// Reduced row echelon form with the zero rows dropped.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each row
  std::size_t rank() const { return pivots.size(); }
};

inline Echelon rref(Matrix m) {
  const FieldSpec& fs = m.field();
  const int q = fs.q();
  const FieldElem* add = fs.add_table();
  const FieldElem* mul = fs.mul_table();
  const FieldElem* neg = fs.neg_table();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pr = r;
    while (pr < m.rows() && m.at(pr, c) == 0) ++pr;
    if (pr == m.rows()) continue;
    if (pr != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(pr, j), m.at(r, j));
    const FieldElem s = fs.inv(m.at(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) = mul[s * q + m.at(r, j)];
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      const FieldElem f = neg[m.at(i, c)];
      for (std::size_t j = c; j < m.cols(); ++j)
        m.at(i, j) = add[m.at(i, j) * q + mul[f * q + m.at(r, j)]];
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix reduced(fs, r, m.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) reduced.at(i, j) = m.at(i, j);
  return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank(); }

/// Basis of {x : m x = 0}, one vector per free column.
inline std::vector<std::vector<FieldElem>> nullspace(const Matrix& m) {
  const Echelon e = rref(m);
  const FieldSpec& fs = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::vector<FieldElem>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<FieldElem> v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivots[i]] = fs.neg(e.reduced.at(i, f));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some x with a x = b, or nullopt. Free variables are set to zero.
inline std::optional<std::vector<FieldElem>> solve(const Matrix& a, std::span<const FieldElem> b) {
  detail::require(b.size() == a.rows(), "right-hand side length mismatch");
  Matrix aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  const Echelon e = rref(std::move(aug));
  std::vector<FieldElem> x(a.cols(), 0);
  for (std::size_t i = 0; i < e.rank(); ++i) {
    if (e.pivots[i] == a.cols()) return std::nullopt;
    x[e.pivots[i]] = e.reduced.at(i, a.cols());
  }
  return x;
}

}  // namespace trl
