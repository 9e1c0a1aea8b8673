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

// Polynomials F^n -> F with formal exponents. x^q is never reduced to x, so
// degree means formal total degree.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trl/field.hpp"
#include "trl/guard.hpp"
#include "trl/rng.hpp"

namespace trl {

using Exponents = std::vector<unsigned>;

class Polynomial {
 public:
  Polynomial(FieldSpec fs, std::size_t nvars) : fs_(std::move(fs)), n_(nvars) {
    detail::require(nvars >= 1, "polynomial needs at least one variable");
  }

  static Polynomial constant(const FieldSpec& fs, std::size_t nvars, FieldElem c) {
    Polynomial p(fs, nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
  }

  /// x_i, 0-based.
  static Polynomial variable(const FieldSpec& fs, std::size_t nvars, std::size_t i) {
    detail::require(i < nvars, "variable index out of range");
    Polynomial p(fs, nvars);
    Exponents e(nvars, 0);
    e[i] = 1;
    p.add_term(e, 1);
    return p;
  }

  /// Adds coeff * x^exps to the polynomial.
  void add_term(const Exponents& exps, FieldElem coeff) {
    detail::require(exps.size() == n_, "exponent vector length does not match nvars");
    fs_.check(coeff);
    if (coeff == 0) return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
      terms_.emplace(exps, coeff);
      return;
    }
    it->second = fs_.add(it->second, coeff);
    if (it->second == 0) terms_.erase(it);
  }

  const FieldSpec& field() const { return fs_; }
  std::size_t nvars() const { return n_; }
  const std::map<Exponents, FieldElem>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total(e));
    return d;
  }

  static unsigned total(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0U); }

  Polynomial operator+(const Polynomial& o) const {
    same(o);
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }

  Polynomial operator-(const Polynomial& o) const { return *this + o.scaled(fs_.neg(1)); }

  Polynomial operator*(const Polynomial& o) const {
    same(o);
    Polynomial r(fs_, n_);
    for (const auto& [e1, c1] : terms_) {
      for (const auto& [e2, c2] : o.terms_) {
        Exponents e(n_);
        for (std::size_t i = 0; i < n_; ++i) e[i] = e1[i] + e2[i];
        r.add_term(e, fs_.mul(c1, c2));
      }
    }
    return r;
  }

  Polynomial scaled(FieldElem c) const {
    Polynomial r(fs_, n_);
    for (const auto& [e, v] : terms_) r.add_term(e, fs_.mul(c, v));
    return r;
  }

  bool operator==(const Polynomial& o) const { return fs_ == o.fs_ && n_ == o.n_ && terms_ == o.terms_; }

  /// Sum of coeff * prod x_i^{e_i}, with 0^0 = 1.
  FieldElem eval(std::span<const FieldElem> x) const {
    detail::require(x.size() == n_, "point length does not match nvars");
    for (auto v : x) fs_.check(v);
    FieldElem acc = 0;
    for (const auto& [e, c] : terms_) {
      FieldElem m = c;
      for (std::size_t i = 0; i < n_ && m != 0; ++i) m = fs_.mul(m, fs_.pow(x[i], e[i]));
      acc = fs_.add(acc, m);
    }
    return acc;
  }

  /// Values at every point of F^n in VecCodec order.
  std::vector<FieldElem> table() const {
    const int q = fs_.q();
    guard::check_pow(q, n_, guard::kEnumerationBits, "polynomial table");
    const VecCodec codec(q, n_);
    std::vector<FieldElem> out(codec.size(), 0);
    const FieldElem* add = fs_.add_table();
    const FieldElem* mul = fs_.mul_table();
    // powers[i][a] = a^e_i for the current term.
    std::vector<FieldElem> x(n_, 0);
    for (const auto& [e, c] : terms_) {
      std::vector<std::vector<FieldElem>> powers(n_, std::vector<FieldElem>(q));
      for (std::size_t i = 0; i < n_; ++i)
        for (int a = 0; a < q; ++a) powers[i][a] = fs_.pow(static_cast<FieldElem>(a), e[i]);
      std::fill(x.begin(), x.end(), 0);
      std::uint64_t idx = 0;
      do {
        FieldElem m = c;
        for (std::size_t i = 0; i < n_ && m != 0; ++i) m = mul[m * q + powers[i][x[i]]];
        out[idx] = add[out[idx] * q + m];
        ++idx;
      } while (next_vector(x, q));
    }
    return out;
  }

  /// P(x + y), expanded.
  Polynomial shifted(std::span<const FieldElem> y) const {
    detail::require(y.size() == n_, "shift length does not match nvars");
    for (auto v : y) fs_.check(v);
    Polynomial r(fs_, n_);
    for (const auto& [e, c] : terms_) {
      // prod_i (x_i + y_i)^{e_i} = prod_i sum_j C(e_i, j) y_i^{e_i - j} x_i^j
      std::vector<std::vector<FieldElem>> factor(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        const auto binom = binomial_row(e[i]);
        factor[i].resize(e[i] + 1);
        for (unsigned j = 0; j <= e[i]; ++j) factor[i][j] = fs_.mul(binom[j], fs_.pow(y[i], e[i] - j));
      }
      Exponents pick(n_, 0);
      do {
        FieldElem m = c;
        for (std::size_t i = 0; i < n_ && m != 0; ++i) m = fs_.mul(m, factor[i][pick[i]]);
        r.add_term(pick, m);
      } while (next_pick(pick, e));
    }
    return r;
  }

  std::string render() const {
    if (terms_.empty()) return "0";
    std::string s;
    // Highest degree first, then reverse lexicographic exponent order.
    std::vector<std::pair<Exponents, FieldElem>> ts(terms_.begin(), terms_.end());
    std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
      const unsigned da = total(a.first), db = total(b.first);
      if (da != db) return da > db;
      return a.first > b.first;
    });
    for (const auto& [e, c] : ts) {
      if (!s.empty()) s += " + ";
      std::string mono;
      for (std::size_t i = 0; i < n_; ++i) {
        if (e[i] == 0) continue;
        mono += "x" + std::to_string(i + 1);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty()) {
        s += std::to_string(c);
      } else {
        s += (c == 1 ? "" : std::to_string(c) + "*") + mono;
      }
    }
    return s;
  }

 private:
  void same(const Polynomial& o) const {
    detail::require(fs_ == o.fs_, "polynomials over different fields");
    detail::require(n_ == o.n_, "polynomials in different numbers of variables");
  }

  static bool next_pick(Exponents& pick, const Exponents& bound) {
    for (std::size_t i = pick.size(); i-- > 0;) {
      if (pick[i] < bound[i]) {
        ++pick[i];
        return true;
      }
      pick[i] = 0;
    }
    return false;
  }

  /// C(e, j) mod p as field elements, j = 0..e.
  std::vector<FieldElem> binomial_row(unsigned e) const {
    const int p = fs_.p();
    std::vector<int> row{1};
    for (unsigned k = 1; k <= e; ++k) {
      std::vector<int> next(k + 1, 1);
      for (unsigned j = 1; j < k; ++j) next[j] = (row[j - 1] + row[j]) % p;
      row = std::move(next);
    }
    std::vector<FieldElem> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = static_cast<FieldElem>(row[j]);
    return out;
  }

  FieldSpec fs_;
  std::size_t n_;
  std::map<Exponents, FieldElem> terms_;
};

/// D_y P(x) = P(x + y) - P(x).
inline Polynomial derivative(const Polynomial& p, std::span<const FieldElem> y) { return p.shifted(y) - p; }

/// Every exponent vector of total degree <= deg, each entry <= cap.
inline std::vector<Exponents> monomials_up_to(std::size_t nvars, unsigned deg, unsigned cap) {
  std::vector<Exponents> out;
  Exponents e(nvars, 0);
  for (;;) {
    if (Polynomial::total(e) <= deg) out.push_back(e);
    std::size_t i = nvars;
    bool done = true;
    while (i-- > 0) {
      if (e[i] < std::min(cap, deg)) {
        ++e[i];
        done = false;
        break;
      }
      e[i] = 0;
    }
    if (done) break;
  }
  return out;
}

/// Uniform coefficients on all monomials of degree <= deg, with a nonzero
/// top-degree coefficient so the degree is exactly deg.
inline Polynomial random_polynomial(const FieldSpec& fs, std::size_t nvars, unsigned deg, Rng& rng) {
  Polynomial p(fs, nvars);
  std::vector<Exponents> top;
  for (const auto& e : monomials_up_to(nvars, deg, deg)) {
    p.add_term(e, static_cast<FieldElem>(rng.below(fs.q())));
    if (Polynomial::total(e) == deg) top.push_back(e);
  }
  if (p.degree() < deg) {
    const auto& e = top[rng.below(top.size())];
    p.add_term(e, static_cast<FieldElem>(1 + rng.below(fs.q() - 1)));
    if (p.degree() < deg) p.add_term(e, 1);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Rank certificates.

struct RankCertificate {
  std::vector<Polynomial> qs;
  std::map<std::vector<FieldElem>, FieldElem> table;  // realized tuples only
};

struct RankCheck {
  std::optional<RankCertificate> certificate;
  bool degrees_ok = false;  // deg Q_i <= deg P - 1 for every i
  // On failure: two points with equal Q-values and different P-values.
  std::optional<std::pair<std::vector<FieldElem>, std::vector<FieldElem>>> witness;
};

inline RankCheck rank_certificate_check(const Polynomial& p, const std::vector<Polynomial>& qs) {
  for (const auto& q : qs) {
    detail::require(q.field() == p.field(), "certificate polynomial over a different field");
    detail::require(q.nvars() == p.nvars(), "certificate polynomial in a different number of variables");
  }
  RankCheck out;
  out.degrees_ok = std::all_of(qs.begin(), qs.end(),
                               [&](const Polynomial& q) { return q.degree() + 1 <= p.degree(); });
  const auto pt = p.table();
  std::vector<std::vector<FieldElem>> qt;
  for (const auto& q : qs) qt.push_back(q.table());
  const VecCodec codec(p.field().q(), p.nvars());
  RankCertificate cert;
  cert.qs = qs;
  std::map<std::vector<FieldElem>, std::uint64_t> first_point;
  std::vector<FieldElem> key(qs.size());
  for (std::uint64_t x = 0; x < pt.size(); ++x) {
    for (std::size_t i = 0; i < qs.size(); ++i) key[i] = qt[i][x];
    auto [it, inserted] = cert.table.emplace(key, pt[x]);
    if (inserted) {
      first_point.emplace(key, x);
    } else if (it->second != pt[x]) {
      out.witness = std::make_pair(codec.decode(first_point.at(key)), codec.decode(x));
      return out;
    }
  }
  out.certificate = std::move(cert);
  return out;
}

}  // namespace trl
