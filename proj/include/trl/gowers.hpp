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

// Bias, derivative tensors, Taylor split, Gowers norms and the correlation
// search for polynomial phases chi_c(P).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "trl/error.hpp"
#include "trl/field.hpp"
#include "trl/guard.hpp"
#include "trl/parallel.hpp"
#include "trl/polynomial.hpp"
#include "trl/rng.hpp"
#include "trl/tensor.hpp"

namespace trl {

inline constexpr double kNormTolerance = 1e-9;

namespace detail {

inline std::vector<std::uint64_t> count_values(std::span<const FieldElem> table, int q) {
  std::vector<std::uint64_t> c(q, 0);
  for (auto v : table) ++c[v];
  return c;
}

/// |sum_j m_j omega^j| / total, from integer exponent counts.
inline long double magnitude_from_counts(std::span<const std::uint64_t> m, std::uint64_t total, int p) {
  if (p == 2) {
    const long double v = (static_cast<long double>(m[0]) - static_cast<long double>(m[1])) / total;
    return std::fabs(v);
  }
  long double re = 0, im = 0;
  for (int j = 0; j < p; ++j) {
    const long double a = 2.0L * std::numbers::pi_v<long double> * j / p;
    re += static_cast<long double>(m[j]) * std::cos(a);
    im += static_cast<long double>(m[j]) * std::sin(a);
  }
  return std::hypot(re, im) / total;
}

/// (x + y) in VecCodec coordinates for every x, given y's digits.
class ShiftTable {
 public:
  ShiftTable(const FieldSpec& fs, std::size_t n) : fs_(fs), n_(n), codec_(fs.q(), n) {
    digits_.resize(codec_.size() * n);
    for (std::uint64_t x = 0; x < codec_.size(); ++x) codec_.decode_into(x, std::span(digits_).subspan(x * n, n));
  }

  std::uint64_t size() const { return codec_.size(); }

  void shift_map(std::uint64_t y, std::vector<std::uint64_t>& out) const {
    const int q = fs_.q();
    const FieldElem* add = fs_.add_table();
    const FieldElem* yd = &digits_[y * n_];
    out.resize(codec_.size());
    for (std::uint64_t x = 0; x < codec_.size(); ++x) {
      const FieldElem* xd = &digits_[x * n_];
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < n_; ++i) code = code * q + add[xd[i] * q + yd[i]];
      out[x] = code;
    }
  }

 private:
  FieldSpec fs_;
  std::size_t n_;
  VecCodec codec_;
  std::vector<FieldElem> digits_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Bias.

struct PolyBias {
  ValueHistogram histogram;
  CharSum value;
  std::optional<cpp_rational> exact;  // when the sum is rational
};

inline PolyBias poly_bias(const Polynomial& p, FieldElem c) {
  const FieldSpec& fs = p.field();
  fs.check(c);
  const auto table = p.table();
  PolyBias out;
  out.histogram = ValueHistogram::from_counts(detail::count_values(table, fs.q()));
  out.value = histogram_char_sum(out.histogram, c, fs);
  out.exact = rational_char_sum(out.histogram, c, fs);
  return out;
}

// ---------------------------------------------------------------------------
// Derivative tensor and Taylor split.

/// T(y_1..y_d) = sum_S (-1)^{d-|S|} P(sum_{i in S} y_i), as its entries on
/// standard basis vectors.
inline Tensor derivative_tensor(const Polynomial& p, std::size_t d) {
  detail::require(d >= 1, "derivative order must be >= 1");
  detail::require(p.degree() <= d, "polynomial degree exceeds the derivative order");
  const FieldSpec& fs = p.field();
  const std::size_t n = p.nvars();
  const Dims dims(d, n);
  guard::check_pow(n, d, guard::kStorageBits, "derivative tensor storage");
  Tensor t = Tensor::zeros(fs, dims);
  std::vector<FieldElem> entries(t.size());
  std::vector<FieldElem> point(n);
  for (std::uint64_t f = 0; f < t.size(); ++f) {
    const auto idx = t.multi_index(f);
    FieldElem acc = 0;
    for (std::uint32_t s = 0; s < (1U << d); ++s) {
      std::fill(point.begin(), point.end(), 0);
      for (std::size_t i = 0; i < d; ++i)
        if (s >> i & 1U) point[idx[i]] = fs.add(point[idx[i]], 1);
      const FieldElem v = p.eval(point);
      const bool negative = (d - std::popcount(s)) % 2 == 1;
      acc = negative ? fs.sub(acc, v) : fs.add(acc, v);
    }
    entries[f] = acc;
  }
  return Tensor(fs, dims, std::move(entries));
}

/// D_{y_1}..D_{y_d} P(x) at one point, via the alternating sum.
inline FieldElem iterated_derivative(const Polynomial& p, std::span<const FieldElem> x,
                                     const std::vector<std::vector<FieldElem>>& ys) {
  const FieldSpec& fs = p.field();
  const std::size_t k = ys.size();
  FieldElem acc = 0;
  std::vector<FieldElem> point(x.begin(), x.end());
  for (std::uint32_t s = 0; s < (1U << k); ++s) {
    std::copy(x.begin(), x.end(), point.begin());
    for (std::size_t i = 0; i < k; ++i)
      if (s >> i & 1U)
        for (std::size_t j = 0; j < point.size(); ++j) point[j] = fs.add(point[j], ys[i][j]);
    const FieldElem v = p.eval(point);
    acc = (k - std::popcount(s)) % 2 == 1 ? fs.sub(acc, v) : fs.add(acc, v);
  }
  return acc;
}

/// Checks T(y_1..y_d) = D_{y_1}..D_{y_d} P(x) at random (x, y) samples and
/// that T is symmetric. Returns false on the first mismatch.
inline bool derivative_tensor_check(const Polynomial& p, const Tensor& t, Rng& rng, std::size_t samples) {
  const FieldSpec& fs = p.field();
  const std::size_t n = p.nvars();
  const std::size_t d = t.order();
  const auto random_vec = [&] {
    std::vector<FieldElem> v(n);
    for (auto& e : v) e = static_cast<FieldElem>(rng.below(fs.q()));
    return v;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = random_vec();
    std::vector<std::vector<FieldElem>> ys(d);
    for (auto& y : ys) y = random_vec();
    const FieldElem lhs = tensor_eval(t, ys);
    if (lhs != iterated_derivative(p, x, ys)) return false;
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::rotate(perm.begin(), perm.begin() + 1, perm.end());
    auto swapped = ys;
    for (std::size_t i = 0; i < d; ++i) swapped[i] = ys[perm[i]];
    if (tensor_eval(t, swapped) != lhs) return false;
    if (d >= 2) {
      std::swap(swapped[0], swapped[1]);
      if (tensor_eval(t, swapped) != lhs) return false;
    }
  }
  return true;
}

struct TaylorSplit {
  Tensor t;
  Polynomial w;
  Polynomial top;  // (1/d!) T(x, ..., x)
};

/// P = (1/d!) T(x..x) + W with deg W <= d - 1. Needs deg P = d < char(F).
inline TaylorSplit taylor_split(const Polynomial& p, std::size_t d) {
  const FieldSpec& fs = p.field();
  if (d >= static_cast<std::size_t>(fs.p())) {
    throw CharacteristicError("taylor split needs d < char(F); got d = " + std::to_string(d) + " over " +
                              fs.name());
  }
  detail::require(p.degree() == d, "taylor split needs deg P = d");
  Tensor t = derivative_tensor(p, d);
  FieldElem fact = 1;
  for (std::size_t i = 2; i <= d; ++i) fact = fs.mul(fact, fs.from_int(static_cast<std::int64_t>(i)));
  const FieldElem inv_fact = fs.inv(fact);
  Polynomial top(fs, p.nvars());
  for (std::uint64_t f = 0; f < t.size(); ++f) {
    if (t[f] == 0) continue;
    Exponents e(p.nvars(), 0);
    for (auto i : t.multi_index(f)) ++e[i];
    top.add_term(e, fs.mul(inv_fact, t[f]));
  }
  Polynomial w = p - top;
  if (w.degree() + 1 > d && !w.is_zero()) {
    throw PropertyViolation("taylor split remainder has degree " + std::to_string(w.degree()));
  }
  return TaylorSplit{std::move(t), std::move(w), std::move(top)};
}

/// P(x) = (1/d!) T(x..x) + W(x) at every x in F^n.
inline bool taylor_verify(const Polynomial& p, const TaylorSplit& s) {
  const FieldSpec& fs = p.field();
  const std::size_t d = s.t.order();
  FieldElem fact = 1;
  for (std::size_t i = 2; i <= d; ++i) fact = fs.mul(fact, fs.from_int(static_cast<std::int64_t>(i)));
  const FieldElem inv_fact = fs.inv(fact);
  const auto pt = p.table();
  const auto wt = s.w.table();
  const VecCodec codec(fs.q(), p.nvars());
  std::vector<std::vector<FieldElem>> args(d, std::vector<FieldElem>(p.nvars()));
  for (std::uint64_t x = 0; x < pt.size(); ++x) {
    codec.decode_into(x, args[0]);
    for (std::size_t i = 1; i < d; ++i) args[i] = args[0];
    const FieldElem v = fs.add(fs.mul(inv_fact, tensor_eval(s.t, args)), wt[x]);
    if (v != pt[x]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Gowers norms.

/// Histogram of D_{y_1}..D_{y_k} P(x) over all (x, y_1..y_k). The innermost
/// derivative is an autocorrelation of the value histogram of
/// g = D_{y_1}..D_{y_{k-1}} P, so the cost is about q^{nk}.
inline ValueHistogram gowers_histogram(const Polynomial& p, std::size_t k, const Exec& exec = {}) {
  detail::require(k >= 1, "Gowers order must be >= 1");
  const FieldSpec& fs = p.field();
  const int q = fs.q();
  const std::size_t n = p.nvars();
  guard::check_pow(q, n * k, guard::kEnumerationBits, "Gowers enumeration");
  const auto base = p.table();
  const detail::ShiftTable shifts(fs, n);
  const std::uint64_t points = shifts.size();
  std::uint64_t outer = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) outer *= points;

  const FieldElem* add = fs.add_table();
  const FieldElem* neg = fs.neg_table();
  const auto parts = parallel::map_chunks<std::vector<std::uint64_t>>(outer, exec, [&](parallel::Range r) {
    std::vector<std::uint64_t> counts(q, 0);
    std::vector<FieldElem> g(points), h(points);
    std::vector<std::uint64_t> map;
    for (std::uint64_t ys = r.begin; ys < r.end; ++ys) {
      g = base;
      std::uint64_t rest = ys;
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const std::uint64_t y = rest % points;
        rest /= points;
        shifts.shift_map(y, map);
        for (std::uint64_t x = 0; x < points; ++x) h[x] = add[g[map[x]] * q + neg[g[x]]];
        g.swap(h);
      }
      const auto hg = detail::count_values(g, q);
      for (int a = 0; a < q; ++a) {
        if (hg[a] == 0) continue;
        for (int b = 0; b < q; ++b) counts[add[b * q + neg[a]]] += hg[a] * hg[b];
      }
    }
    return counts;
  });
  std::vector<std::uint64_t> counts(q, 0);
  for (const auto& c : parts)
    for (int a = 0; a < q; ++a) counts[a] += c[a];
  return ValueHistogram::from_counts(counts);
}

struct GowersNorm {
  double value = 0;  // ||chi_c(P)||_{U^k}
  ValueHistogram histogram;
  std::optional<cpp_rational> power;  // the 2^k-th power, when rational
};

inline GowersNorm gowers_norm(const Polynomial& p, std::size_t k, FieldElem c, const Exec& exec = {}) {
  const FieldSpec& fs = p.field();
  fs.check(c);
  detail::require(c != 0, "Gowers norm needs a nontrivial character");
  GowersNorm out;
  out.histogram = gowers_histogram(p, k, exec);
  const CharSum s = histogram_char_sum(out.histogram, c, fs);
  if (std::fabs(s.im) > kNormTolerance || s.re < -kNormTolerance) {
    throw PropertyViolation("Gowers average is not a nonnegative real");
  }
  out.power = rational_char_sum(out.histogram, c, fs);
  const double pw = out.power ? static_cast<double>(*out.power) : s.re;
  out.value = std::pow(std::max(pw, 0.0), 1.0 / static_cast<double>(1ULL << k));
  return out;
}

// ---------------------------------------------------------------------------
// Correlation search.

struct CorrelationResult {
  Polynomial best;
  double value = 0;
  std::uint64_t candidates = 0;
  bool prime_field = true;  // false: outside the prime-field hypothesis
};

/// Candidate monomials: reduced exponents (< q), total degree <= max_deg,
/// ordered by degree then exponents descending.
inline std::vector<Exponents> correlation_monomials(std::size_t nvars, unsigned max_deg, int q) {
  auto ms = monomials_up_to(nvars, max_deg, static_cast<unsigned>(q - 1));
  std::stable_sort(ms.begin(), ms.end(), [](const Exponents& a, const Exponents& b) {
    const unsigned da = Polynomial::total(a), db = Polynomial::total(b);
    if (da != db) return da < db;
    return a > b;
  });
  return ms;
}

/// Maximizes |E_x chi_c(P(x) - Q(x))| over every Q of degree <= max_deg. The
/// returned Q is the first candidate, in coefficient-vector order, whose value
/// is within kNormTolerance of the maximum.
inline CorrelationResult correlation_search(const Polynomial& p, unsigned max_deg, FieldElem c,
                                            const Exec& exec = {}) {
  const FieldSpec& fs = p.field();
  fs.check(c);
  detail::require(c != 0, "correlation search needs a nontrivial character");
  const int q = fs.q();
  const std::size_t n = p.nvars();
  const auto monos = correlation_monomials(n, max_deg, q);
  const std::size_t m = monos.size();
  guard::check_pow(q, m, guard::kEnumerationBits, "correlation search candidates");
  const auto pt = p.table();
  const std::uint64_t points = pt.size();
  std::vector<std::vector<FieldElem>> mono_tables;
  for (const auto& e : monos) {
    Polynomial mono(fs, n);
    mono.add_term(e, 1);
    mono_tables.push_back(mono.table());
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= q;
  const FieldElem* add = fs.add_table();
  const FieldElem* mul = fs.mul_table();
  const FieldElem* neg = fs.neg_table();
  const std::uint8_t* tr = fs.trace_table();
  const VecCodec codec(q, m);

  // Visits every candidate in [begin, end) with its value.
  const auto sweep = [&](parallel::Range r, auto&& visit) {
    if (r.begin >= r.end) return;
    std::vector<FieldElem> coeffs(m);
    codec.decode_into(r.begin, coeffs);
    std::vector<FieldElem> diff(pt);  // P - Q
    for (std::size_t j = 0; j < m; ++j) {
      if (coeffs[j] == 0) continue;
      for (std::uint64_t x = 0; x < points; ++x)
        diff[x] = add[diff[x] * q + neg[mul[coeffs[j] * q + mono_tables[j][x]]]];
    }
    std::vector<std::uint64_t> ex(fs.p());
    for (std::uint64_t idx = r.begin;;) {
      std::fill(ex.begin(), ex.end(), 0);
      for (std::uint64_t x = 0; x < points; ++x) ++ex[tr[mul[c * q + diff[x]]]];
      visit(idx, detail::magnitude_from_counts(ex, points, fs.p()));
      if (++idx >= r.end) break;
      // Odometer step: bumping coefficient j by one subtracts mono_j.
      for (std::size_t j = m; j-- > 0;) {
        const FieldElem old = coeffs[j];
        coeffs[j] = static_cast<FieldElem>((old + 1) % q == 0 ? 0 : old + 1);
        // Coefficients count through codes 0..q-1; the delta is new - old.
        const FieldElem delta = add[coeffs[j] * q + neg[old]];
        for (std::uint64_t x = 0; x < points; ++x)
          diff[x] = add[diff[x] * q + neg[mul[delta * q + mono_tables[j][x]]]];
        if (coeffs[j] != 0) break;
      }
    }
  };

  const auto maxima = parallel::map_chunks<long double>(total, exec, [&](parallel::Range r) {
    long double best = -1;
    sweep(r, [&](std::uint64_t, long double v) { best = std::max(best, v); });
    return best;
  });
  long double best = -1;
  for (auto v : maxima) best = std::max(best, v);
  const long double threshold = best - kNormTolerance;
  const auto firsts = parallel::map_chunks<std::uint64_t>(total, exec, [&](parallel::Range r) {
    std::uint64_t first = total;
    sweep(r, [&](std::uint64_t idx, long double v) {
      if (first == total && v >= threshold) first = idx;
    });
    return first;
  });
  std::uint64_t arg = total;
  for (auto f : firsts) arg = std::min(arg, f);

  CorrelationResult out{Polynomial(fs, n), static_cast<double>(best), total, fs.is_prime_field()};
  const auto coeffs = codec.decode(arg);
  for (std::size_t j = 0; j < m; ++j) out.best.add_term(monos[j], coeffs[j]);
  return out;
}

}  // namespace trl
