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

// Dense order-d tensors over F in row-major layout (last index fastest).
// Modes are numbered from 0.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trl/guard.hpp"
#include "trl/linalg.hpp"
#include "trl/rng.hpp"

namespace trl {

using Dims = std::vector<std::size_t>;

inline std::uint64_t dims_product(std::span<const std::size_t> dims) {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

inline std::uint64_t dims_sum(std::span<const std::size_t> dims) {
  std::uint64_t n = 0;
  for (auto d : dims) n += d;
  return n;
}

class Tensor {
 public:
  Tensor(FieldSpec fs, Dims dims, std::vector<FieldElem> entries)
      : fs_(std::move(fs)), dims_(std::move(dims)), entries_(std::move(entries)) {
    detail::require(!dims_.empty(), "tensor order must be at least 1");
    for (auto n : dims_) detail::require(n >= 1, "tensor dimensions must be >= 1");
    // Storage guard; checked before the size comparison so huge dims fail cleanly.
    cpp_int cells = 1;
    for (auto n : dims_) cells *= n;
    guard::check(cells, guard::kStorageBits, "tensor storage");
    detail::require(entries_.size() == dims_product(dims_), "tensor entry count does not match dims");
    for (auto x : entries_) fs_.check(x);
  }

  static Tensor zeros(const FieldSpec& fs, Dims dims) {
    const auto n = dims_product(dims);
    return Tensor(fs, std::move(dims), std::vector<FieldElem>(n, 0));
  }

  /// Order-1 tensor holding a vector.
  static Tensor vector(const FieldSpec& fs, std::vector<FieldElem> v) {
    const std::size_t n = v.size();
    return Tensor(fs, Dims{n}, std::move(v));
  }

  /// The product array u_1 (x) ... (x) u_d.
  static Tensor outer(const FieldSpec& fs, const std::vector<std::vector<FieldElem>>& factors) {
    detail::require(!factors.empty(), "outer product needs at least one factor");
    Dims dims;
    std::vector<FieldElem> e{1};
    const int q = fs.q();
    const FieldElem* mul = fs.mul_table();
    for (const auto& f : factors) {
      dims.push_back(f.size());
      std::vector<FieldElem> next;
      next.reserve(e.size() * f.size());
      for (FieldElem b : f) fs.check(b);
      for (FieldElem a : e)
        for (FieldElem b : f) next.push_back(mul[a * q + b]);
      e = std::move(next);
    }
    return Tensor(fs, std::move(dims), std::move(e));
  }

  /// One-hot array at a flat index.
  static Tensor unit(const FieldSpec& fs, Dims dims, std::uint64_t flat) {
    Tensor t = zeros(fs, std::move(dims));
    detail::require(flat < t.size(), "unit index out of range");
    t.entries_[flat] = 1;
    return t;
  }

  const FieldSpec& field() const { return fs_; }
  const Dims& dims() const { return dims_; }
  std::size_t order() const { return dims_.size(); }
  std::uint64_t size() const { return entries_.size(); }
  const std::vector<FieldElem>& entries() const { return entries_; }
  FieldElem operator[](std::uint64_t flat) const { return entries_[flat]; }

  std::uint64_t flat_index(std::span<const std::size_t> idx) const {
    detail::require(idx.size() == dims_.size(), "index order mismatch");
    std::uint64_t f = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      detail::require(idx[i] < dims_[i], "index out of range");
      f = f * dims_[i] + idx[i];
    }
    return f;
  }
  std::vector<std::size_t> multi_index(std::uint64_t flat) const {
    std::vector<std::size_t> idx(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
      idx[i] = flat % dims_[i];
      flat /= dims_[i];
    }
    return idx;
  }
  FieldElem at(std::span<const std::size_t> idx) const { return entries_[flat_index(idx)]; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](FieldElem x) { return x == 0; });
  }
  /// First nonzero flat index, or size() for the zero tensor.
  std::uint64_t leading_index() const {
    for (std::uint64_t i = 0; i < entries_.size(); ++i)
      if (entries_[i] != 0) return i;
    return entries_.size();
  }

  Tensor operator+(const Tensor& o) const { return combine(o, false); }
  Tensor operator-(const Tensor& o) const { return combine(o, true); }
  Tensor scaled(FieldElem c) const {
    std::vector<FieldElem> e(entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = fs_.mul(c, entries_[i]);
    return Tensor(fs_, dims_, std::move(e));
  }

  bool same_shape(const Tensor& o) const { return fs_ == o.fs_ && dims_ == o.dims_; }
  bool operator==(const Tensor& o) const { return same_shape(o) && entries_ == o.entries_; }

 private:
  Tensor combine(const Tensor& o, bool subtract) const {
    detail::require(same_shape(o), "tensor shape mismatch");
    const int q = fs_.q();
    const FieldElem* add = fs_.add_table();
    const FieldElem* neg = fs_.neg_table();
    std::vector<FieldElem> e(entries_.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      const FieldElem b = subtract ? neg[o.entries_[i]] : o.entries_[i];
      e[i] = add[entries_[i] * q + b];
    }
    return Tensor(fs_, dims_, std::move(e));
  }

  FieldSpec fs_;
  Dims dims_;
  std::vector<FieldElem> entries_;
};

// ---------------------------------------------------------------------------
// Mode sets and splits.

/// A set of modes as a bitmask; bit i is mode i.
using ModeMask = std::uint32_t;

inline std::vector<std::size_t> mask_modes(ModeMask m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; m != 0; ++i, m >>= 1U)
    if (m & 1U) out.push_back(i);
  return out;
}

inline ModeMask modes_mask(std::span<const std::size_t> modes) {
  ModeMask m = 0;
  for (auto i : modes) m |= ModeMask{1} << i;
  return m;
}

inline ModeMask full_mask(std::size_t d) { return d >= 32 ? ~ModeMask{0} : (ModeMask{1} << d) - 1; }

/// Dimensions of F^I, i.e. (n_i : i in I) in increasing mode order.
inline Dims sub_dims(const Dims& dims, ModeMask m) {
  Dims out;
  for (auto i : mask_modes(m)) out.push_back(dims[i]);
  return out;
}

/// (|S|, lexicographic) order on mode sets.
inline bool split_order_less(ModeMask a, ModeMask b) {
  const int pa = std::popcount(a);
  const int pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  return mask_modes(a) < mask_modes(b);
}

/// A proper nonempty subset S of the d modes.
class IndexSplit {
 public:
  IndexSplit(std::size_t d, ModeMask s) : d_(d), s_(s) {
    detail::require(d >= 2 && d <= 31, "splits need order between 2 and 31");
    detail::require(s != 0 && (s & ~full_mask(d)) == 0 && s != full_mask(d),
                    "split must be a proper nonempty subset of the modes");
  }
  static IndexSplit of(std::size_t d, std::span<const std::size_t> modes) {
    for (auto m : modes) detail::require(m < d, "split mode out of range");
    return IndexSplit(d, modes_mask(modes));
  }

  std::size_t order() const { return d_; }
  ModeMask mask() const { return s_; }
  ModeMask complement_mask() const { return full_mask(d_) & ~s_; }
  std::vector<std::size_t> modes() const { return mask_modes(s_); }
  std::vector<std::size_t> complement_modes() const { return mask_modes(complement_mask()); }
  IndexSplit complement() const { return IndexSplit(d_, complement_mask()); }

  bool operator==(const IndexSplit&) const = default;

 private:
  std::size_t d_;
  ModeMask s_;
};

/// Every split in (|S|, lex) order.
inline std::vector<IndexSplit> all_splits(std::size_t d) {
  std::vector<ModeMask> masks;
  for (ModeMask m = 1; m < full_mask(d); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), split_order_less);
  std::vector<IndexSplit> out;
  for (auto m : masks) out.emplace_back(d, m);
  return out;
}

/// One split per unordered pair {S, S^c}: the one that precedes its
/// complement in (|S|, lex) order. Returned in that order.
inline std::vector<IndexSplit> canonical_splits(std::size_t d) {
  std::vector<IndexSplit> out;
  for (const auto& s : all_splits(d))
    if (split_order_less(s.mask(), s.complement_mask())) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Operations.

namespace detail {

/// Maps each flat index of the full tensor to (row over S, column over S^c).
struct SplitIndexer {
  std::vector<std::uint64_t> row_of, col_of;
  std::uint64_t rows = 1, cols = 1;

  SplitIndexer(const Dims& dims, ModeMask s) {
    for (std::size_t i = 0; i < dims.size(); ++i) ((s >> i) & 1U ? rows : cols) *= dims[i];
    const std::uint64_t total = rows * cols;
    row_of.resize(total);
    col_of.resize(total);
    std::vector<std::size_t> idx(dims.size(), 0);
    for (std::uint64_t f = 0; f < total; ++f) {
      std::uint64_t r = 0, c = 0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        if ((s >> i) & 1U)
          r = r * dims[i] + idx[i];
        else
          c = c * dims[i] + idx[i];
      }
      row_of[f] = r;
      col_of[f] = c;
      for (std::size_t i = dims.size(); i-- > 0;) {
        if (++idx[i] < dims[i]) break;
        idx[i] = 0;
      }
    }
  }
};

/// out[j] = sum_i v[i] * block[i * rest + j]
inline void contract_leading(const FieldSpec& fs, std::span<const FieldElem> block, std::size_t lead,
                             std::span<const FieldElem> v, std::span<FieldElem> out) {
  const std::size_t rest = out.size();
  const int q = fs.q();
  const FieldElem* add = fs.add_table();
  const FieldElem* mul = fs.mul_table();
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t i = 0; i < lead; ++i) {
    const FieldElem c = v[i];
    if (c == 0) continue;
    const FieldElem* row = block.data() + i * rest;
    const FieldElem* mrow = mul + c * q;
    for (std::size_t j = 0; j < rest; ++j) out[j] = add[out[j] * q + mrow[row[j]]];
  }
}

}  // namespace detail

/// T(v^1, ..., v^d) = sum t_{i_1..i_d} v^1_{i_1} ... v^d_{i_d}.
inline FieldElem tensor_eval(const Tensor& t, const std::vector<std::vector<FieldElem>>& vs) {
  detail::require(vs.size() == t.order(), "tensor_eval needs one vector per mode");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    detail::require(vs[i].size() == t.dims()[i], "tensor_eval vector length mismatch");
    for (auto x : vs[i]) t.field().check(x);
  }
  std::vector<FieldElem> cur = t.entries();
  std::uint64_t rest = t.size();
  for (std::size_t m = 0; m < t.order(); ++m) {
    rest /= t.dims()[m];
    std::vector<FieldElem> next(rest);
    detail::contract_leading(t.field(), cur, t.dims()[m], vs[m], next);
    cur = std::move(next);
  }
  return cur[0];
}

/// Entry-wise dot product r.s of same-shape arrays.
inline FieldElem tensor_dot(const Tensor& r, const Tensor& s) {
  detail::require(r.same_shape(s), "dot product shape mismatch");
  return dot(r.field(), r.entries(), s.entries());
}

/// rs over the leading k = order(s) modes: (rs)_{i_{k+1}..i_d} =
/// sum r_{i_1..i_d} s_{i_1..i_k}. Yields a FieldElem when k = d.
inline std::variant<Tensor, FieldElem> contract(const Tensor& r, const Tensor& s) {
  detail::require(r.field() == s.field(), "contract field mismatch");
  const std::size_t k = s.order();
  detail::require(k <= r.order(), "contract: s has higher order than r");
  detail::require(std::equal(s.dims().begin(), s.dims().end(), r.dims().begin()),
                  "contract: leading dimensions do not match");
  if (k == r.order()) return tensor_dot(r, s);
  const std::uint64_t rest = r.size() / s.size();
  std::vector<FieldElem> out(rest);
  detail::contract_leading(r.field(), r.entries(), s.size(), s.entries(), out);
  return Tensor(r.field(), Dims(r.dims().begin() + k, r.dims().end()), std::move(out));
}

/// Rows indexed by multi-indices over S, columns over S^c, both row-major.
inline Matrix matricize(const Tensor& t, const IndexSplit& split) {
  detail::require(split.order() == t.order(), "split order does not match tensor");
  const detail::SplitIndexer ix(t.dims(), split.mask());
  Matrix m(t.field(), ix.rows, ix.cols);
  for (std::uint64_t f = 0; f < t.size(); ++f) m.at(ix.row_of[f], ix.col_of[f]) = t[f];
  return m;
}

/// Inverse of matricize.
inline Tensor unmatricize(const Matrix& m, const Dims& dims, const IndexSplit& split) {
  detail::require(split.order() == dims.size(), "split order does not match dims");
  const detail::SplitIndexer ix(dims, split.mask());
  detail::require(m.rows() == ix.rows && m.cols() == ix.cols, "matrix shape does not match split");
  std::vector<FieldElem> e(dims_product(dims));
  for (std::uint64_t f = 0; f < e.size(); ++f) e[f] = m.at(ix.row_of[f], ix.col_of[f]);
  return Tensor(m.field(), dims, std::move(e));
}

/// T(v) = T1(v^i : i in S) T2(v^i : i not in S).
inline Tensor rank_one(const IndexSplit& split, const Tensor& t1, const Tensor& t2) {
  detail::require(t1.field() == t2.field(), "rank_one field mismatch");
  const std::size_t d = split.order();
  detail::require(t1.order() == split.modes().size() && t2.order() == split.complement_modes().size(),
                  "rank_one factor orders do not match split");
  Dims dims(d);
  const auto sm = split.modes();
  const auto cm = split.complement_modes();
  for (std::size_t i = 0; i < sm.size(); ++i) dims[sm[i]] = t1.dims()[i];
  for (std::size_t i = 0; i < cm.size(); ++i) dims[cm[i]] = t2.dims()[i];
  const detail::SplitIndexer ix(dims, split.mask());
  const FieldSpec& fs = t1.field();
  const int q = fs.q();
  const FieldElem* mul = fs.mul_table();
  std::vector<FieldElem> e(dims_product(dims));
  for (std::uint64_t f = 0; f < e.size(); ++f) e[f] = mul[t1[ix.row_of[f]] * q + t2[ix.col_of[f]]];
  return Tensor(fs, std::move(dims), std::move(e));
}

/// Result mode j is input mode perm[j].
inline Tensor permute_modes(const Tensor& t, std::span<const std::size_t> perm) {
  const std::size_t d = t.order();
  detail::require(perm.size() == d, "permutation length mismatch");
  std::vector<bool> seen(d, false);
  for (auto p : perm) {
    detail::require(p < d && !seen[p], "not a permutation");
    seen[p] = true;
  }
  Dims nd(d);
  for (std::size_t j = 0; j < d; ++j) nd[j] = t.dims()[perm[j]];
  std::vector<std::uint64_t> in_stride(d);
  std::uint64_t s = 1;
  for (std::size_t i = d; i-- > 0;) {
    in_stride[i] = s;
    s *= t.dims()[i];
  }
  std::vector<FieldElem> e(t.size());
  std::vector<std::size_t> idx(d, 0);
  for (std::uint64_t f = 0; f < e.size(); ++f) {
    std::uint64_t src = 0;
    for (std::size_t j = 0; j < d; ++j) src += idx[j] * in_stride[perm[j]];
    e[f] = t[src];
    for (std::size_t j = d; j-- > 0;) {
      if (++idx[j] < nd[j]) break;
      idx[j] = 0;
    }
  }
  return Tensor(t.field(), std::move(nd), std::move(e));
}

/// Permutation moving `mode` to the last position, others keeping order.
inline std::vector<std::size_t> move_mode_last(std::size_t d, std::size_t mode) {
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < d; ++i)
    if (i != mode) perm.push_back(i);
  perm.push_back(mode);
  return perm;
}

inline Tensor random_tensor(const FieldSpec& fs, const Dims& dims, Rng& rng) {
  std::vector<FieldElem> e(dims_product(dims));
  for (auto& x : e) x = static_cast<FieldElem>(rng.below(fs.q()));
  return Tensor(fs, dims, std::move(e));
}

}  // namespace trl
