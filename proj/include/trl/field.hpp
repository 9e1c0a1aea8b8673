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

// Prime and prime-power finite fields of order q <= 64.
//
// An element is encoded by its integer code in [0, q): the little-endian base-p
// digit vector of its polynomial representative modulo the field's monic
// irreducible modulus. Code 0 is zero and code 1 is one. All arithmetic is
// served from q x q lookup tables built once per FieldSpec and shared between
// copies.
//
// Additive characters are chi_c(a) = omega^{Tr(c a)} with omega = e^{2 pi i/p}
// and Tr the absolute trace. Complex numbers are never formed here except in
// histogram_char_sum, which is a reporting boundary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trl/error.hpp"

namespace trl {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

using FieldElem = std::uint8_t;

inline constexpr int kMaxFieldOrder = 64;

namespace detail {

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over F_p as little-endian coefficient vectors.
inline void trim(std::vector<int>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
  trim(a);
  std::vector<int> mm = m;
  trim(mm);
  const int lead_inv = [&] {
    for (int x = 1; x < p; ++x)
      if (x * mm.back() % p == 1) return x;
    return 1;
  }();
  while (a.size() >= mm.size()) {
    const int f = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - mm.size();
    for (std::size_t i = 0; i < mm.size(); ++i)
      a[shift + i] = ((a[shift + i] - f * mm[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

/// Exhaustive irreducibility test: no monic factor of degree 1..deg/2.
inline bool is_irreducible(const std::vector<int>& m, int p) {
  const int deg = static_cast<int>(m.size()) - 1;
  if (deg < 1) return false;
  for (int fd = 1; 2 * fd <= deg; ++fd) {
    int count = 1;
    for (int i = 0; i < fd; ++i) count *= p;
    for (int c = 0; c < count; ++c) {
      std::vector<int> f(fd + 1, 0);
      int x = c;
      for (int i = 0; i < fd; ++i) {
        f[i] = x % p;
        x /= p;
      }
      f[fd] = 1;
      if (poly_mod(m, f, p).empty()) return false;
    }
  }
  return true;
}

/// Default moduli (Conway polynomials), little-endian coefficients.
inline std::optional<std::vector<int>> default_modulus(int p, int k) {
  struct Entry {
    int p, k;
    std::vector<int> m;
  };
  static const std::vector<Entry> table = {
      {2, 2, {1, 1, 1}},          {2, 3, {1, 1, 0, 1}},       {2, 4, {1, 1, 0, 0, 1}},
      {2, 5, {1, 0, 1, 0, 0, 1}}, {2, 6, {1, 1, 0, 1, 1, 0, 1}}, {3, 2, {2, 2, 1}},
      {3, 3, {1, 2, 0, 1}},       {5, 2, {2, 4, 1}},          {7, 2, {3, 6, 1}},
  };
  for (const auto& e : table)
    if (e.p == p && e.k == k) return e.m;
  return std::nullopt;
}

}  // namespace detail

/// A finite field F_{p^k}, q = p^k <= 64. Immutable; copies share tables.
class FieldSpec {
 public:
  FieldSpec() : FieldSpec(make(2)) {}

  /// Validates p, k and the modulus. For k > 1 a missing modulus selects the
  /// shipped default for that order.
  static FieldSpec make(int p, int k = 1, std::optional<std::vector<int>> modulus = std::nullopt) {
    detail::require(detail::is_prime(p), "field characteristic " + std::to_string(p) + " is not prime");
    detail::require(k >= 1, "extension degree must be >= 1");
    int q = 1;
    for (int i = 0; i < k; ++i) {
      q *= p;
      detail::require(q <= kMaxFieldOrder, "field order exceeds " + std::to_string(kMaxFieldOrder));
    }
    if (k == 1) {
      detail::require(!modulus.has_value() || modulus->size() <= 2,
                      "prime fields take no modulus polynomial");
      modulus.reset();
    } else {
      if (!modulus) modulus = detail::default_modulus(p, k);
      detail::require(modulus.has_value(), "no default modulus for this order");
      detail::require(static_cast<int>(modulus->size()) == k + 1, "modulus must have k+1 coefficients");
      for (int c : *modulus) detail::require(c >= 0 && c < p, "modulus coefficient out of range");
      detail::require(modulus->back() == 1, "modulus must be monic");
      detail::require(detail::is_irreducible(*modulus, p), "modulus is reducible over F_p");
    }
    return FieldSpec(p, k, q, modulus.value_or(std::vector<int>{}));
  }

  /// Field of order q with the default modulus.
  static FieldSpec of_order(int q) {
    for (int p = 2; p <= q; ++p) {
      if (!detail::is_prime(p)) continue;
      int k = 0;
      int x = q;
      while (x % p == 0) {
        x /= p;
        ++k;
      }
      if (x == 1) return make(p, k);
      if (k > 0) break;
    }
    detail::fail_input("no field of order " + std::to_string(q));
  }

  int p() const { return t_->p; }
  int k() const { return t_->k; }
  int q() const { return t_->q; }
  bool is_prime_field() const { return t_->k == 1; }
  /// Empty for prime fields.
  const std::vector<int>& modulus() const { return t_->modulus; }

  bool valid(int code) const { return code >= 0 && code < t_->q; }
  void check(int code) const {
    if (!valid(code)) detail::fail_input("field element code " + std::to_string(code) + " out of range");
  }

  FieldElem add(FieldElem a, FieldElem b) const { return check2(a, b), t_->add[a * t_->q + b]; }
  FieldElem sub(FieldElem a, FieldElem b) const { return check2(a, b), t_->add[a * t_->q + t_->neg[b]]; }
  FieldElem neg(FieldElem a) const { return check(a), t_->neg[a]; }
  FieldElem mul(FieldElem a, FieldElem b) const { return check2(a, b), t_->mul[a * t_->q + b]; }
  FieldElem inv(FieldElem a) const {
    check(a);
    if (a == 0) throw InvalidInput("inversion of zero");
    return t_->inv[a];
  }
  FieldElem pow(FieldElem a, std::uint64_t e) const {
    check(a);
    FieldElem r = 1;
    FieldElem b = a;
    while (e > 0) {
      if (e & 1U) r = t_->mul[r * t_->q + b];
      e >>= 1U;
      b = t_->mul[b * t_->q + b];
    }
    return r;
  }
  /// Image of an integer under Z -> F_p -> F.
  FieldElem from_int(std::int64_t n) const {
    const std::int64_t p = t_->p;
    return static_cast<FieldElem>(((n % p) + p) % p);
  }

  /// Tr_{F_q/F_p}(a) as an integer in [0, p).
  int trace(FieldElem a) const { return check(a), t_->trace[a]; }

  /// Tr(c a): the exponent of omega in chi_c(a).
  int char_exponent(FieldElem a, FieldElem c) const { return t_->trace[mul(c, a)]; }

  // Unchecked table views for inner loops; index as [a * q + b].
  const FieldElem* add_table() const { return t_->add.data(); }
  const FieldElem* mul_table() const { return t_->mul.data(); }
  const FieldElem* neg_table() const { return t_->neg.data(); }
  const std::uint8_t* trace_table() const { return t_->trace.data(); }

  bool operator==(const FieldSpec& o) const {
    return t_ == o.t_ || (t_->p == o.t_->p && t_->k == o.t_->k && t_->modulus == o.t_->modulus);
  }

  std::string name() const {
    return t_->k == 1 ? "F_" + std::to_string(t_->p) : "F_" + std::to_string(t_->q);
  }

 private:
  struct Tables {
    int p = 2, k = 1, q = 2;
    std::vector<int> modulus;
    std::vector<FieldElem> add, mul, neg, inv;
    std::vector<std::uint8_t> trace;
  };

  FieldSpec(int p, int k, int q, std::vector<int> modulus) {
    auto t = std::make_shared<Tables>();
    t->p = p;
    t->k = k;
    t->q = q;
    t->modulus = std::move(modulus);
    const auto digits = [&](int code) {
      std::vector<int> d(k);
      for (int i = 0; i < k; ++i) {
        d[i] = code % p;
        code /= p;
      }
      return d;
    };
    const auto encode = [&](const std::vector<int>& d) {
      int code = 0;
      for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) code = code * p + d[i];
      return code;
    };
    t->add.resize(q * q);
    t->mul.resize(q * q);
    t->neg.resize(q);
    t->inv.assign(q, 0);
    t->trace.resize(q);
    for (int a = 0; a < q; ++a) {
      const auto da = digits(a);
      std::vector<int> dn(k);
      for (int i = 0; i < k; ++i) dn[i] = (p - da[i]) % p;
      t->neg[a] = static_cast<FieldElem>(encode(dn));
      for (int b = 0; b < q; ++b) {
        const auto db = digits(b);
        std::vector<int> s(k);
        for (int i = 0; i < k; ++i) s[i] = (da[i] + db[i]) % p;
        t->add[a * q + b] = static_cast<FieldElem>(encode(s));
        std::vector<int> prod(2 * k, 0);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        if (k > 1) prod = detail::poly_mod(prod, t->modulus, p);
        prod.resize(k, 0);
        t->mul[a * q + b] = static_cast<FieldElem>(encode(prod));
      }
    }
    for (int a = 1; a < q; ++a)
      for (int b = 1; b < q; ++b)
        if (t->mul[a * q + b] == 1) t->inv[a] = static_cast<FieldElem>(b);
    for (int a = 0; a < q; ++a) {
      // Tr(a) = a + a^p + ... + a^{p^{k-1}}
      int acc = 0;
      int x = a;
      for (int j = 0; j < k; ++j) {
        acc = t->add[acc * q + x];
        int y = 1;
        for (int e = 0; e < p; ++e) y = t->mul[y * q + x];
        x = y;
      }
      if (acc >= p) throw PropertyViolation("trace left the prime field");
      t->trace[a] = static_cast<std::uint8_t>(acc);
    }
    t_ = std::move(t);
  }

  void check2(FieldElem a, FieldElem b) const {
    check(a);
    check(b);
  }

  std::shared_ptr<const Tables> t_;
};

// ---------------------------------------------------------------------------
// Vectors in F^n are addressed by their base-q index with the first
// coordinate most significant, which matches row-major tensor layout.

/// Encodes and decodes vectors of F^n as integers in [0, q^n).
class VecCodec {
 public:
  VecCodec(int q, std::size_t n) : q_(q), n_(n) {
    size_ = 1;
    for (std::size_t i = 0; i < n; ++i) size_ *= static_cast<std::uint64_t>(q);
  }
  std::uint64_t size() const { return size_; }
  std::size_t length() const { return n_; }

  std::uint64_t encode(std::span<const FieldElem> v) const {
    std::uint64_t idx = 0;
    for (FieldElem x : v) idx = idx * q_ + x;
    return idx;
  }
  std::vector<FieldElem> decode(std::uint64_t idx) const {
    std::vector<FieldElem> v(n_);
    decode_into(idx, v);
    return v;
  }
  void decode_into(std::uint64_t idx, std::span<FieldElem> v) const {
    for (std::size_t i = n_; i-- > 0;) {
      v[i] = static_cast<FieldElem>(idx % q_);
      idx /= q_;
    }
  }

 private:
  int q_;
  std::size_t n_;
  std::uint64_t size_;
};

/// Advances v to the next vector in code order; false after the last one.
inline bool next_vector(std::span<FieldElem> v, int q) {
  for (std::size_t i = v.size(); i-- > 0;) {
    if (++v[i] < q) return true;
    v[i] = 0;
  }
  return false;
}

inline FieldElem dot(const FieldSpec& fs, std::span<const FieldElem> a, std::span<const FieldElem> b) {
  detail::require(a.size() == b.size(), "dot product length mismatch");
  const int q = fs.q();
  const FieldElem* add = fs.add_table();
  const FieldElem* mul = fs.mul_table();
  FieldElem acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = add[acc * q + mul[a[i] * q + b[i]]];
  return acc;
}

// ---------------------------------------------------------------------------
// Value histograms and character sums.

/// Exact distribution of a field-valued function over an enumerated domain.
struct ValueHistogram {
  std::vector<cpp_int> counts;  // indexed by element code
  cpp_int total;

  static ValueHistogram from_counts(const std::vector<std::uint64_t>& c) {
    ValueHistogram h;
    h.counts.reserve(c.size());
    for (auto x : c) {
      h.counts.emplace_back(x);
      h.total += x;
    }
    return h;
  }

  static ValueHistogram from_counts(std::vector<cpp_int> c) {
    ValueHistogram h;
    h.counts = std::move(c);
    for (const auto& x : h.counts) h.total += x;
    return h;
  }

  /// counts[a] equal for every a != 0.
  bool uniform_off_zero() const {
    for (std::size_t a = 2; a < counts.size(); ++a)
      if (counts[a] != counts[1]) return false;
    return true;
  }

  bool operator==(const ValueHistogram&) const = default;
};

/// m_j = #{a : Tr(c a) = j} weighted by counts, j in [0, p). The character
/// sum is (1/total) sum_j m_j omega^j.
inline std::vector<cpp_int> exponent_counts(const ValueHistogram& h, FieldElem c, const FieldSpec& fs) {
  detail::require(static_cast<int>(h.counts.size()) == fs.q(), "histogram size does not match field");
  std::vector<cpp_int> m(fs.p());
  for (int a = 0; a < fs.q(); ++a) m[fs.char_exponent(static_cast<FieldElem>(a), c)] += h.counts[a];
  return m;
}

/// The normalized character sum as an exact rational when it is one. Since
/// 1 + omega + ... + omega^{p-1} = 0 is the only Q-linear relation among
/// powers of omega, sum_j m_j omega^j is rational iff m_1 = ... = m_{p-1},
/// and then equals m_0 - m_1.
inline std::optional<cpp_rational> rational_char_sum(const ValueHistogram& h, FieldElem c,
                                                     const FieldSpec& fs) {
  detail::require(h.total > 0, "empty histogram");
  const auto m = exponent_counts(h, c, fs);
  for (std::size_t j = 2; j < m.size(); ++j)
    if (m[j] != m[1]) return std::nullopt;
  return cpp_rational(m[0] - m[1], h.total);
}

struct CharSum {
  double re = 0;
  double im = 0;
  bool exact = false;
  double magnitude() const { return std::hypot(re, im); }
};

inline CharSum histogram_char_sum(const ValueHistogram& h, FieldElem c, const FieldSpec& fs) {
  detail::require(h.total > 0, "empty histogram");
  const auto m = exponent_counts(h, c, fs);
  CharSum out;
  if (fs.p() == 2) {
    const cpp_int num = m[0] - m[1];
    const cpp_rational v(num, h.total);
    out.re = static_cast<double>(v);
    const cpp_int abs_num = num < 0 ? cpp_int(-num) : num;
    const bool pow2 = (h.total & (h.total - 1)) == 0;
    out.exact = pow2 && abs_num < (cpp_int(1) << 53);
    return out;
  }
  long double re = 0;
  long double im = 0;
  const long double total = static_cast<long double>(h.total);
  for (int j = 0; j < fs.p(); ++j) {
    const long double w = static_cast<long double>(m[j]) / total;
    const long double angle = 2.0L * std::numbers::pi_v<long double> * j / fs.p();
    re += w * std::cos(angle);
    im += w * std::sin(angle);
  }
  out.re = static_cast<double>(re);
  out.im = static_cast<double>(im);
  return out;
}

}  // namespace trl
