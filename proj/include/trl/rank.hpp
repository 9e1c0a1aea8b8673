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

// Analytic rank and partition rank of tensors.
//
// bias(T) is computed as the probability that a random (d-1)-tuple of vectors
// kills the slice T(v^1, ..., v^{d-1}, .), which is an exact rational. The
// character-sum form is computed separately by full enumeration and serves as
// an independent cross-check.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trl/parallel.hpp"
#include "trl/subspace.hpp"
#include "trl/tensor.hpp"

namespace trl {

// ---------------------------------------------------------------------------
// Bias and analytic rank.

struct ExactBias {
  cpp_int numerator;    // zero-slice tuples
  cpp_int denominator;  // q^{sum of the non-slice dims}
  cpp_rational value() const { return cpp_rational(numerator, denominator); }
};

namespace detail {

/// Walks every tuple (v^first .. v^{last-1}) contracting the leading modes of
/// a tensor one at a time. visit(buffer) sees the remaining array.
class ContractionWalker {
 public:
  ContractionWalker(const Tensor& t, std::size_t depth) : fs_(t.field()), dims_(t.dims()), depth_(depth) {
    bufs_.resize(depth + 1);
    bufs_[0] = t.entries();
    std::uint64_t rest = t.size();
    for (std::size_t j = 0; j < depth; ++j) {
      rest /= dims_[j];
      bufs_[j + 1].assign(rest, 0);
      vecs_.emplace_back(dims_[j], 0);
    }
  }

  /// Enumerates v^0 over codes [begin, end) and all later vectors fully.
  template <class Visit>
  void run(std::uint64_t begin, std::uint64_t end, Visit&& visit) {
    if (depth_ == 0) {
      visit(std::span<const FieldElem>(bufs_[0]));
      return;
    }
    const VecCodec codec(fs_.q(), dims_[0]);
    for (std::uint64_t c = begin; c < end; ++c) {
      codec.decode_into(c, vecs_[0]);
      contract_leading(fs_, bufs_[0], dims_[0], vecs_[0], bufs_[1]);
      recurse(1, visit);
    }
  }

 private:
  template <class Visit>
  void recurse(std::size_t j, Visit& visit) {
    if (j == depth_) {
      visit(std::span<const FieldElem>(bufs_[j]));
      return;
    }
    auto& v = vecs_[j];
    std::fill(v.begin(), v.end(), 0);
    do {
      contract_leading(fs_, bufs_[j], dims_[j], v, bufs_[j + 1]);
      recurse(j + 1, visit);
    } while (next_vector(v, fs_.q()));
  }

  FieldSpec fs_;
  Dims dims_;
  std::size_t depth_;
  std::vector<std::vector<FieldElem>> bufs_;
  std::vector<std::vector<FieldElem>> vecs_;
};

inline std::uint64_t ipow_u64(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace detail

/// Exact bias via zero-slice counting. slice_mode selects which mode plays the
/// role of the free argument x (default: the last mode).
inline ExactBias bias_exact(const Tensor& t, std::optional<std::size_t> slice_mode = std::nullopt,
                            const Exec& exec = {}) {
  const std::size_t d = t.order();
  detail::require(d >= 2, "bias needs a tensor of order at least 2");
  const std::size_t mode = slice_mode.value_or(d - 1);
  detail::require(mode < d, "slice mode out of range");
  const Tensor u = mode == d - 1 ? t : permute_modes(t, move_mode_last(d, mode));
  const std::uint64_t exponent = dims_sum(u.dims()) - u.dims().back();
  guard::check_pow(t.field().q(), exponent, guard::kEnumerationBits, "bias_exact enumeration");

  const std::uint64_t first = detail::ipow_u64(t.field().q(), u.dims()[0]);
  const auto counts = parallel::map_chunks<std::uint64_t>(first, exec, [&](parallel::Range r) {
    detail::ContractionWalker w(u, d - 1);
    std::uint64_t zeros = 0;
    w.run(r.begin, r.end, [&](std::span<const FieldElem> slice) {
      for (FieldElem x : slice)
        if (x != 0) return;
      ++zeros;
    });
    return zeros;
  });
  ExactBias b;
  for (auto c : counts) b.numerator += c;
  b.denominator = guard::ipow(t.field().q(), exponent);
  return b;
}

/// Histogram of T(v^1, ..., v^d) over every input tuple.
inline ValueHistogram bias_charsum_crosscheck(const Tensor& t, const Exec& exec = {}) {
  const std::size_t d = t.order();
  guard::check_pow(t.field().q(), dims_sum(t.dims()), guard::kEnumerationBits,
                   "bias_charsum_crosscheck enumeration");
  const int q = t.field().q();
  const std::uint64_t first = detail::ipow_u64(q, t.dims()[0]);
  const auto parts = parallel::map_chunks<std::vector<std::uint64_t>>(first, exec, [&](parallel::Range r) {
    std::vector<std::uint64_t> c(q, 0);
    detail::ContractionWalker w(t, d);
    w.run(r.begin, r.end, [&](std::span<const FieldElem> value) { ++c[value[0]]; });
    return c;
  });
  std::vector<std::uint64_t> counts(q, 0);
  for (const auto& p : parts)
    for (int a = 0; a < q; ++a) counts[a] += p[a];
  return ValueHistogram::from_counts(counts);
}

/// True when every nontrivial character sum of h equals the given bias.
inline bool charsum_matches_bias(const ValueHistogram& h, const ExactBias& b, const FieldSpec& fs) {
  const cpp_rational target = b.value();
  for (int c = 1; c < fs.q(); ++c) {
    const auto v = rational_char_sum(h, static_cast<FieldElem>(c), fs);
    if (!v || *v != target) return false;
  }
  return true;
}

struct AnalyticRank {
  ExactBias bias;
  double value = 0;           // -log_q bias
  std::int64_t floor_cert = 0;  // largest m with q^{-m} >= bias
  std::int64_t ceil_cert = 0;   // smallest m with bias >= q^{-m}
};

inline AnalyticRank arank_from_bias(const ExactBias& b, int q) {
  detail::require(b.numerator > 0 && b.numerator <= b.denominator, "bias must lie in (0, 1]");
  AnalyticRank a;
  a.bias = b;
  // Exact comparisons only; no floating logs.
  cpp_int qm = 1;  // q^m
  std::int64_t m = 0;
  while (b.denominator >= b.numerator * qm * q) {
    qm *= q;
    ++m;
  }
  a.floor_cert = m;
  a.ceil_cert = (b.numerator * qm == b.denominator) ? m : m + 1;
  const long double num = static_cast<long double>(b.numerator);
  const long double den = static_cast<long double>(b.denominator);
  a.value = static_cast<double>((std::log(den) - std::log(num)) / std::log(static_cast<long double>(q)));
  if (a.ceil_cert == a.floor_cert) a.value = static_cast<double>(a.floor_cert);
  return a;
}

inline AnalyticRank arank(const Tensor& t, const Exec& exec = {}) {
  return arank_from_bias(bias_exact(t, std::nullopt, exec), t.field().q());
}

// ---------------------------------------------------------------------------
// Partition rank.

struct PrankSummand {
  IndexSplit split;
  Tensor t1;  // over the modes of split
  Tensor t2;  // over the complementary modes
  Tensor expand() const { return rank_one(split, t1, t2); }
};

struct PrankCertificate {
  std::vector<PrankSummand> summands;

  Tensor reconstitute(const FieldSpec& fs, const Dims& dims) const {
    Tensor acc = Tensor::zeros(fs, dims);
    for (const auto& s : summands) acc = acc + s.expand();
    return acc;
  }
  bool reconstitutes(const Tensor& target) const {
    for (const auto& s : summands)
      if (s.split.order() != target.order()) return false;
    return reconstitute(target.field(), target.dims()) == target;
  }
};

namespace detail {

/// Factors of a rank-one matrix M = a b^T with b the first nonzero row.
inline std::pair<std::vector<FieldElem>, std::vector<FieldElem>> rank_one_factors(const Matrix& m) {
  const FieldSpec& fs = m.field();
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (r0 = 0; r0 < m.rows(); ++r0) {
    for (c0 = 0; c0 < m.cols() && m.at(r0, c0) == 0; ++c0) {
    }
    if (c0 < m.cols()) break;
  }
  const auto brow = m.row(r0);
  std::vector<FieldElem> b(brow.begin(), brow.end());
  const FieldElem s = fs.inv(m.at(r0, c0));
  std::vector<FieldElem> a(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) a[i] = fs.mul(m.at(i, c0), s);
  return {std::move(a), std::move(b)};
}

}  // namespace detail

/// A split and factors when T has partition rank exactly 1.
inline std::optional<PrankSummand> prank_one_check(const Tensor& t) {
  detail::require(t.order() >= 2, "partition rank needs order at least 2");
  detail::require(!t.is_zero(), "prank_one_check: the zero tensor has partition rank 0");
  for (const auto& split : canonical_splits(t.order())) {
    const Matrix m = matricize(t, split);
    if (rank(m) != 1) continue;
    auto [a, b] = detail::rank_one_factors(m);
    PrankSummand s{split, Tensor(t.field(), sub_dims(t.dims(), split.mask()), std::move(a)),
                   Tensor(t.field(), sub_dims(t.dims(), split.complement_mask()), std::move(b))};
    if (!(s.expand() == t)) throw PropertyViolation("rank-one factorization failed to reconstitute");
    return s;
  }
  return std::nullopt;
}

/// Decomposition along one split from a rank factorization of the
/// matricization: M = C R with R the reduced echelon rows.
inline PrankCertificate split_decomposition(const Tensor& t, const IndexSplit& split) {
  const Matrix m = matricize(t, split);
  const Echelon e = rref(m);
  PrankCertificate cert;
  const Dims rd = sub_dims(t.dims(), split.mask());
  const Dims cd = sub_dims(t.dims(), split.complement_mask());
  for (std::size_t i = 0; i < e.rank(); ++i) {
    std::vector<FieldElem> col(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) col[r] = m.at(r, e.pivots[i]);
    const auto row = e.reduced.row(i);
    cert.summands.push_back({split, Tensor(t.field(), rd, std::move(col)),
                             Tensor(t.field(), cd, std::vector<FieldElem>(row.begin(), row.end()))});
  }
  return cert;
}

enum class SearchStatus { exact, inconclusive };

inline const char* to_string(SearchStatus s) { return s == SearchStatus::exact ? "exact" : "inconclusive"; }

struct PrankBounds {
  std::int64_t lower = 0;        // proven lower bound; equals upper when exact
  std::int64_t upper = 0;
  std::int64_t arank_lower = 0;  // ceil(arank), the starting lower bound
  PrankCertificate certificate;  // witnesses upper
  SearchStatus status = SearchStatus::inconclusive;
  std::uint64_t nodes = 0;
  bool lower_from_arank = true;
};

namespace detail {

/// Iterative-deepening search for a decomposition into partition-rank-one
/// summands. A summand is only tried if it is nonzero at the residual's
/// leading coordinate: some summand of any decomposition must be, and summand
/// order is irrelevant, so the restriction loses no decompositions.
class PrankSearch {
 public:
  PrankSearch(const Tensor& target, std::uint64_t budget) : target_(target), budget_(budget) {
    for (const auto& s : canonical_splits(target.order())) {
      SplitData sd{s, SplitIndexer(target.dims(), s.mask()), sub_dims(target.dims(), s.mask()),
                   sub_dims(target.dims(), s.complement_mask())};
      splits_.push_back(std::move(sd));
    }
  }

  struct OutOfBudget {};

  /// A decomposition of at most `size` summands, or nullopt if none exists.
  /// Throws OutOfBudget.
  std::optional<PrankCertificate> run(std::int64_t size) {
    std::vector<PrankSummand> out;
    if (!dfs(target_.entries(), size, out)) return std::nullopt;
    PrankCertificate c;
    c.summands.assign(out.rbegin(), out.rend());
    return c;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  struct SplitData {
    IndexSplit split;
    SplitIndexer ix;
    Dims row_dims, col_dims;
  };

  void tick() {
    if (++nodes_ > budget_) throw OutOfBudget{};
  }

  bool dfs(const std::vector<FieldElem>& r, std::int64_t left, std::vector<PrankSummand>& out) {
    std::uint64_t lead = r.size();
    for (std::uint64_t i = 0; i < r.size(); ++i)
      if (r[i] != 0) {
        lead = i;
        break;
      }
    if (lead == r.size()) return true;
    if (left <= 0) return false;
    const Tensor residual(target_.field(), target_.dims(), r);
    if (left == 1) {
      tick();
      auto s = prank_one_check(residual);
      if (!s) return false;
      out.push_back(std::move(*s));
      return true;
    }
    const std::string key(r.begin(), r.end());
    if (auto it = failed_.find(key); it != failed_.end() && it->second >= left) return false;

    const FieldSpec& fs = target_.field();
    const int q = fs.q();
    const FieldElem* add = fs.add_table();
    const FieldElem* mul = fs.mul_table();
    const FieldElem* neg = fs.neg_table();
    std::vector<FieldElem> next(r.size());
    for (const auto& sd : splits_) {
      const std::uint64_t rp = sd.ix.row_of[lead];
      const std::uint64_t cp = sd.ix.col_of[lead];
      std::vector<FieldElem> a(sd.ix.rows, 0);
      a[rp] = 1;
      // a ranges over vectors with a[rp] = 1; b over vectors with b[cp] != 0.
      do {
        if (a[rp] != 1) continue;
        std::vector<FieldElem> b(sd.ix.cols, 0);
        b[cp] = 1;
        do {
          if (b[cp] == 0) continue;
          tick();
          for (std::uint64_t f = 0; f < r.size(); ++f) {
            const FieldElem x = mul[a[sd.ix.row_of[f]] * q + b[sd.ix.col_of[f]]];
            next[f] = add[r[f] * q + neg[x]];
          }
          if (dfs(next, left - 1, out)) {
            out.push_back({sd.split, Tensor(fs, sd.row_dims, a), Tensor(fs, sd.col_dims, b)});
            return true;
          }
        } while (next_vector(b, q));
      } while (next_vector(a, q));
    }
    auto& slot = failed_[key];
    slot = std::max<std::int64_t>(slot, left);
    return false;
  }

  const Tensor& target_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<SplitData> splits_;
  std::unordered_map<std::string, std::int64_t> failed_;
};

}  // namespace detail

/// Lower bound ceil(arank), upper bound from the best single-split
/// rank factorization, closed by iterative deepening within `budget` nodes.
inline PrankBounds prank_bounds(const Tensor& t, std::uint64_t budget, const Exec& exec = {}) {
  detail::require(t.order() >= 2, "partition rank needs order at least 2");
  PrankBounds out;
  if (t.is_zero()) {
    out.status = SearchStatus::exact;
    return out;
  }
  try {
    out.lower = std::max<std::int64_t>(1, arank(t, exec).ceil_cert);
  } catch (const GuardExceeded&) {
    out.lower = 1;
    out.lower_from_arank = false;
  }
  out.arank_lower = out.lower;
  bool have_upper = false;
  for (const auto& s : canonical_splits(t.order())) {
    auto c = split_decomposition(t, s);
    if (!have_upper || c.summands.size() < out.certificate.summands.size()) {
      out.certificate = std::move(c);
      have_upper = true;
    }
  }
  out.upper = static_cast<std::int64_t>(out.certificate.summands.size());
  if (!out.certificate.reconstitutes(t)) throw PropertyViolation("split decomposition does not reconstitute");

  detail::PrankSearch search(t, budget);
  try {
    while (out.lower < out.upper) {
      auto found = search.run(out.lower);
      if (found) {
        out.certificate = std::move(*found);
        out.upper = static_cast<std::int64_t>(out.certificate.summands.size());
        break;
      }
      ++out.lower;
    }
    out.status = SearchStatus::exact;
  } catch (const detail::PrankSearch::OutOfBudget&) {
    out.status = SearchStatus::inconclusive;
  }
  out.nodes = search.nodes();
  if (!out.certificate.reconstitutes(t)) throw PropertyViolation("prank certificate does not reconstitute");
  return out;
}

// ---------------------------------------------------------------------------
// k-degeneracy.

struct DegeneracyComponent {
  Subspace h;        // H_I inside F^I
  Tensor component;  // element of H_I (x) F^{I^c}, full order d
};

/// Witness that a tensor lies in sum_{I subset [d-1], I nonempty} H_I (x) F^{I^c}.
struct DegeneracyWitness {
  FieldSpec fs;
  Dims dims;
  std::map<ModeMask, DegeneracyComponent> parts;

  std::size_t k() const {
    std::size_t k = 0;
    for (const auto& [m, p] : parts) k = std::max(k, p.h.dim());
    return k;
  }
  Tensor tensor() const {
    Tensor acc = Tensor::zeros(fs, dims);
    for (const auto& [m, p] : parts) acc = acc + p.component;
    return acc;
  }
};

namespace detail {

inline void check_degeneracy_key(const Dims& dims, ModeMask m, const Subspace& h) {
  const std::size_t d = dims.size();
  require(d >= 2, "degeneracy needs order at least 2");
  require(m != 0 && (m & ~full_mask(d - 1)) == 0, "degeneracy index sets must be nonempty subsets of [d-1]");
  require(h.ambient() == dims_product(sub_dims(dims, m)), "H_I ambient does not match F^I");
}

}  // namespace detail

/// A uniformly random element of sum_I H_I (x) F^{I^c} with its witness.
inline std::pair<Tensor, DegeneracyWitness> degenerate_sample(const FieldSpec& fs, const Dims& dims,
                                                             const std::map<ModeMask, Subspace>& h,
                                                             Rng& rng) {
  DegeneracyWitness w{fs, dims, {}};
  const std::size_t d = dims.size();
  for (const auto& [m, space] : h) {
    detail::check_degeneracy_key(dims, m, space);
    detail::require(space.field() == fs, "H_I field mismatch");
    const IndexSplit split(d, m);
    const Dims rd = sub_dims(dims, m);
    const Dims cd = sub_dims(dims, split.complement_mask());
    Tensor comp = Tensor::zeros(fs, dims);
    for (std::size_t j = 0; j < space.dim(); ++j) {
      const Tensor s(fs, rd, space.basis_vector(j));
      comp = comp + rank_one(split, s, random_tensor(fs, cd, rng));
    }
    w.parts.emplace(m, DegeneracyComponent{space, std::move(comp)});
  }
  Tensor t = w.tensor();
  return {std::move(t), std::move(w)};
}

/// Expands each component over the echelon basis of H_I:
/// w = sum_j s_j (x) t_j, at most 2^{d-1} k summands in total.
inline PrankCertificate degenerate_decompose(const DegeneracyWitness& w) {
  PrankCertificate cert;
  const std::size_t d = w.dims.size();
  for (const auto& [m, part] : w.parts) {
    detail::check_degeneracy_key(w.dims, m, part.h);
    detail::require(part.component.field() == w.fs && part.component.dims() == w.dims,
                    "degeneracy component shape mismatch");
    const IndexSplit split(d, m);
    const Matrix mat = matricize(part.component, split);
    const Dims rd = sub_dims(w.dims, m);
    const Dims cd = sub_dims(w.dims, split.complement_mask());
    Tensor rebuilt = Tensor::zeros(w.fs, w.dims);
    for (std::size_t j = 0; j < part.h.dim(); ++j) {
      const auto row = mat.row(part.h.pivots()[j]);
      std::vector<FieldElem> tj(row.begin(), row.end());
      if (std::all_of(tj.begin(), tj.end(), [](FieldElem x) { return x == 0; })) continue;
      PrankSummand s{split, Tensor(w.fs, rd, part.h.basis_vector(j)), Tensor(w.fs, cd, std::move(tj))};
      rebuilt = rebuilt + s.expand();
      cert.summands.push_back(std::move(s));
    }
    if (!(rebuilt == part.component))
      throw InvalidInput("inconsistent witness: component is not in H_I (x) F^{I^c}");
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Membership in sum_{I nonempty} V_I (x) F^{I^c}.

struct SumGenerator {
  ModeMask modes;            // I
  std::size_t basis_index;   // row of V_I's echelon basis
  std::uint64_t column;      // unit array index over F^{I^c} (0 when I = [d])
};

class SubspaceSum {
 public:
  SubspaceSum(const FieldSpec& fs, const Dims& dims, const std::map<ModeMask, Subspace>& v)
      : fs_(fs), dims_(dims), span_(Subspace::zero(fs, 1)) {
    const std::size_t d = dims.size();
    const cpp_int ambient = dims_product(dims);
    guard::check(ambient, guard::kLinearSolveBits, "subspace-sum linear algebra");
    std::vector<std::vector<FieldElem>> rows;
    for (const auto& [m, space] : v) {
      detail::require(m != 0 && (m & ~full_mask(d)) == 0, "V_I index sets must be nonempty subsets of [d]");
      detail::require(space.field() == fs, "V_I field mismatch");
      detail::require(space.ambient() == dims_product(sub_dims(dims, m)), "V_I ambient does not match F^I");
      for (std::size_t j = 0; j < space.dim(); ++j) {
        if (m == full_mask(d)) {
          gens_.push_back({m, j, 0});
          rows.push_back(space.basis_vector(j));
          continue;
        }
        const IndexSplit split(d, m);
        const Dims rd = sub_dims(dims, m);
        const Dims cd = sub_dims(dims, split.complement_mask());
        const Tensor b(fs, rd, space.basis_vector(j));
        for (std::uint64_t c = 0; c < dims_product(cd); ++c) {
          gens_.push_back({m, j, c});
          rows.push_back(rank_one(split, b, Tensor::unit(fs, cd, c)).entries());
        }
      }
    }
    span_ = Subspace::span(fs, dims_product(dims), rows);
    rows_ = std::move(rows);
  }

  const Subspace& span() const { return span_; }
  const std::vector<SumGenerator>& generators() const { return gens_; }
  Tensor generator_tensor(std::size_t i) const { return Tensor(fs_, dims_, rows_.at(i)); }

  bool contains(const Tensor& t) const { return span_.contains(t.entries()); }
  bool contains(std::span<const FieldElem> flat) const { return span_.contains(flat); }

  /// Coefficients c with sum_i c_i generator_i = t.
  std::optional<std::vector<FieldElem>> coefficients(const Tensor& t) const {
    const std::uint64_t n = dims_product(dims_);
    Matrix a(fs_, n, rows_.size());
    for (std::size_t g = 0; g < rows_.size(); ++g)
      for (std::uint64_t i = 0; i < n; ++i) a.at(i, g) = rows_[g][i];
    return solve(a, t.entries());
  }

 private:
  FieldSpec fs_;
  Dims dims_;
  Subspace span_;
  std::vector<SumGenerator> gens_;
  std::vector<std::vector<FieldElem>> rows_;
};

struct MembershipResult {
  bool member = false;
  std::vector<SumGenerator> generators;
  std::vector<FieldElem> coefficients;  // empty unless member
};

inline MembershipResult membership_subspace_sum(const Tensor& t, const std::map<ModeMask, Subspace>& v) {
  const SubspaceSum sum(t.field(), t.dims(), v);
  MembershipResult r;
  r.generators = sum.generators();
  if (!sum.contains(t)) return r;
  auto c = sum.coefficients(t);
  if (!c) throw PropertyViolation("membership: span test and linear solve disagree");
  r.member = true;
  r.coefficients = std::move(*c);
  return r;
}

// ---------------------------------------------------------------------------
// (k, alpha)-forcing.

struct ForcingInstance {
  FieldSpec fs;
  Dims dims;
  std::vector<std::pair<Tensor, std::uint64_t>> q;  // arrays with multiplicities
  cpp_rational alpha{1};
  std::map<ModeMask, Subspace> v;

  std::uint64_t q_size() const {
    std::uint64_t n = 0;
    for (const auto& [t, m] : q) n += m;
    return n;
  }
  std::size_t k() const {
    std::size_t k = 0;
    for (const auto& [m, s] : v) k = std::max(k, s.dim());
    return k;
  }
};

struct ForcingVerdict {
  bool forcing = false;
  std::optional<Tensor> counterexample;  // first in code order
  std::uint64_t collected = 0;           // arrays meeting the annihilation threshold
  std::uint64_t enumerated = 0;
};

/// Enumerates every r; collects those with r.q = 0 for at least alpha |Q| of
/// Q (with multiplicity) and checks each lies in sum_I V_I (x) F^{I^c}.
inline ForcingVerdict forcing_check(const ForcingInstance& inst, const Exec& exec = {}) {
  detail::require(inst.alpha > 0 && inst.alpha <= 1, "alpha must lie in (0, 1]");
  for (const auto& [t, m] : inst.q)
    detail::require(t.field() == inst.fs && t.dims() == inst.dims, "Q member shape mismatch");
  const std::uint64_t n = dims_product(inst.dims);
  guard::check_pow(inst.fs.q(), n, guard::kEnumerationBits, "forcing_check enumeration");
  const SubspaceSum sum(inst.fs, inst.dims, inst.v);
  const cpp_int need_num = numerator(inst.alpha) * inst.q_size();
  const cpp_int den = denominator(inst.alpha);
  const std::uint64_t total = detail::ipow_u64(inst.fs.q(), n);
  const VecCodec codec(inst.fs.q(), n);

  struct Part {
    std::uint64_t collected = 0;
    std::optional<std::uint64_t> first_bad;
  };
  const auto parts = parallel::map_chunks<Part>(total, exec, [&](parallel::Range range) {
    Part p;
    std::vector<FieldElem> r(n);
    for (std::uint64_t code = range.begin; code < range.end; ++code) {
      codec.decode_into(code, r);
      std::uint64_t hits = 0;
      for (const auto& [t, m] : inst.q)
        if (dot(inst.fs, r, t.entries()) == 0) hits += m;
      if (cpp_int(hits) * den < need_num) continue;
      ++p.collected;
      if (!p.first_bad && !sum.contains(r)) p.first_bad = code;
    }
    return p;
  });
  ForcingVerdict v;
  v.enumerated = total;
  for (const auto& p : parts) {
    v.collected += p.collected;
    if (!v.counterexample && p.first_bad)
      v.counterexample = Tensor(inst.fs, inst.dims, codec.decode(*p.first_bad));
  }
  v.forcing = !v.counterexample.has_value();
  return v;
}

}  // namespace trl
