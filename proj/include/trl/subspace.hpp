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

// Subspaces of F^N held as a canonical reduced-echelon basis, so two
// subspaces are equal iff their bases are equal.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trl/linalg.hpp"
#include "trl/rng.hpp"

namespace trl {

class Subspace {
 public:
  /// The zero subspace of F_2^1; a placeholder for aggregate members.
  Subspace() : Subspace(zero(FieldSpec(), 1)) {}

  /// The span of the given vectors.
  static Subspace span(const FieldSpec& fs, std::size_t ambient,
                       const std::vector<std::vector<FieldElem>>& vectors) {
    Echelon e = rref(Matrix::from_rows(fs, ambient, vectors));
    return Subspace(fs, ambient, std::move(e));
  }
  static Subspace zero(const FieldSpec& fs, std::size_t ambient) { return span(fs, ambient, {}); }
  static Subspace full(const FieldSpec& fs, std::size_t ambient) {
    std::vector<std::vector<FieldElem>> rows(ambient, std::vector<FieldElem>(ambient, 0));
    for (std::size_t i = 0; i < ambient; ++i) rows[i][i] = 1;
    return span(fs, ambient, rows);
  }

  const FieldSpec& field() const { return fs_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rank(); }
  std::size_t codim() const { return ambient_ - dim(); }
  const Matrix& basis() const { return basis_.reduced; }
  const std::vector<std::size_t>& pivots() const { return basis_.pivots; }
  std::vector<FieldElem> basis_vector(std::size_t i) const {
    auto r = basis_.reduced.row(i);
    return {r.begin(), r.end()};
  }
  std::vector<std::vector<FieldElem>> basis_vectors() const {
    std::vector<std::vector<FieldElem>> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_vector(i));
    return out;
  }

  /// v minus its projection along the pivots; zero iff v is a member.
  std::vector<FieldElem> reduce(std::span<const FieldElem> v) const {
    detail::require(v.size() == ambient_, "vector length does not match ambient dimension");
    std::vector<FieldElem> r(v.begin(), v.end());
    const int q = fs_.q();
    const FieldElem* add = fs_.add_table();
    const FieldElem* mul = fs_.mul_table();
    const FieldElem* neg = fs_.neg_table();
    for (std::size_t i = 0; i < dim(); ++i) {
      const FieldElem f = r[basis_.pivots[i]];
      if (f == 0) continue;
      const FieldElem nf = neg[f];
      auto row = basis_.reduced.row(i);
      for (std::size_t j = 0; j < ambient_; ++j) r[j] = add[r[j] * q + mul[nf * q + row[j]]];
    }
    return r;
  }

  bool contains(std::span<const FieldElem> v) const {
    const auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](FieldElem x) { return x == 0; });
  }

  /// Coordinates of a member with respect to the echelon basis.
  std::optional<std::vector<FieldElem>> coordinates(std::span<const FieldElem> v) const {
    if (!contains(v)) return std::nullopt;
    std::vector<FieldElem> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = v[basis_.pivots[i]];
    return c;
  }

  std::vector<FieldElem> combine(std::span<const FieldElem> coords) const {
    detail::require(coords.size() == dim(), "coordinate length mismatch");
    std::vector<FieldElem> v(ambient_, 0);
    const int q = fs_.q();
    const FieldElem* add = fs_.add_table();
    const FieldElem* mul = fs_.mul_table();
    for (std::size_t i = 0; i < dim(); ++i) {
      if (coords[i] == 0) continue;
      auto row = basis_.reduced.row(i);
      for (std::size_t j = 0; j < ambient_; ++j) v[j] = add[v[j] * q + mul[coords[i] * q + row[j]]];
    }
    return v;
  }

  bool is_subspace_of(const Subspace& o) const {
    for (std::size_t i = 0; i < dim(); ++i)
      if (!o.contains(basis_.reduced.row(i))) return false;
    return true;
  }

  /// Complement with respect to the entry-wise dot product sum_i x_i y_i.
  Subspace orthogonal_complement() const {
    if (dim() == 0) return full(fs_, ambient_);
    return span(fs_, ambient_, nullspace(basis_.reduced));
  }

  Subspace sum(const Subspace& o) const {
    check_same(o);
    auto rows = basis_vectors();
    for (auto& v : o.basis_vectors()) rows.push_back(std::move(v));
    return span(fs_, ambient_, rows);
  }

  Subspace intersect(const Subspace& o) const {
    check_same(o);
    return orthogonal_complement().sum(o.orthogonal_complement()).orthogonal_complement();
  }

  /// Number of elements, q^dim.
  std::uint64_t size() const {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < dim(); ++i) s *= static_cast<std::uint64_t>(fs_.q());
    return s;
  }

  /// All elements as vector codes, sorted ascending.
  std::vector<std::uint64_t> element_codes() const {
    const VecCodec codec(fs_.q(), ambient_);
    std::vector<std::uint64_t> out;
    out.reserve(size());
    std::vector<FieldElem> coords(dim(), 0);
    do {
      out.push_back(codec.encode(combine(coords)));
    } while (next_vector(coords, fs_.q()));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<FieldElem> random_element(Rng& rng) const {
    std::vector<FieldElem> coords(dim());
    for (auto& c : coords) c = static_cast<FieldElem>(rng.below(fs_.q()));
    return combine(coords);
  }

  /// Uniformly random subspace of the given dimension (rejection on rank).
  static Subspace random(const FieldSpec& fs, std::size_t ambient, std::size_t dimension, Rng& rng) {
    detail::require(dimension <= ambient, "subspace dimension exceeds ambient");
    for (;;) {
      std::vector<std::vector<FieldElem>> rows(dimension, std::vector<FieldElem>(ambient));
      for (auto& r : rows)
        for (auto& x : r) x = static_cast<FieldElem>(rng.below(fs.q()));
      Subspace s = span(fs, ambient, rows);
      if (s.dim() == dimension) return s;
    }
  }

  bool operator==(const Subspace& o) const {
    return fs_ == o.fs_ && ambient_ == o.ambient_ && basis_.reduced == o.basis_.reduced;
  }

 private:
  Subspace(FieldSpec fs, std::size_t ambient, Echelon e)
      : fs_(std::move(fs)), ambient_(ambient), basis_(std::move(e)) {}

  void check_same(const Subspace& o) const {
    detail::require(fs_ == o.fs_ && ambient_ == o.ambient_, "subspace ambient mismatch");
  }

  FieldSpec fs_;
  std::size_t ambient_;
  Echelon basis_;
};

}  // namespace trl
