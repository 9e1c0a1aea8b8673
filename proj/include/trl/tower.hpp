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

// Symbolic expressions for tower-type bounds.
//
// tower_b(0, x) = x and tower_b(h, x) = b^{tower_b(h-1, x)}. Expressions are
// immutable trees. Numeric expansion is attempted only while every
// intermediate value fits in the bit cap (4096 by default); otherwise the
// symbolic form is the value.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trl/error.hpp"

namespace trl {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline constexpr unsigned kTowerCapBits = 4096;

class Expr {
 public:
  enum class Kind { number, add, mul, neg, pow, log, tower };

  static Expr num(cpp_rational v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = std::move(v);
    return Expr(std::move(n));
  }
  static Expr add(Expr a, Expr b) { return binary(Kind::add, std::move(a), std::move(b)); }
  static Expr mul(Expr a, Expr b) { return binary(Kind::mul, std::move(a), std::move(b)); }
  static Expr pow(Expr base, Expr exp) { return binary(Kind::pow, std::move(base), std::move(exp)); }
  static Expr neg(Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::neg;
    n->args = {std::move(a)};
    return Expr(std::move(n));
  }
  /// log_base(arg)
  static Expr log(std::int64_t base, Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::log;
    n->base = base;
    n->args = {std::move(arg)};
    return Expr(std::move(n));
  }
  static Expr tower(std::int64_t base, Expr height, Expr top) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::tower;
    n->base = base;
    n->args = {std::move(height), std::move(top)};
    return Expr(std::move(n));
  }

  Kind kind() const { return n_->kind; }
  const cpp_rational& value() const { return n_->value; }
  std::int64_t base() const { return n_->base; }
  const Expr& arg(std::size_t i) const { return n_->args.at(i); }
  std::size_t arity() const { return n_->args.size(); }

  bool operator==(const Expr& o) const {
    if (n_ == o.n_) return true;
    if (n_->kind != o.n_->kind || n_->base != o.n_->base || n_->args.size() != o.n_->args.size()) return false;
    if (n_->kind == Kind::number) return n_->value == o.n_->value;
    for (std::size_t i = 0; i < n_->args.size(); ++i)
      if (!(n_->args[i] == o.n_->args[i])) return false;
    return true;
  }

  std::string render() const { return render_prec(0); }

  /// Exact value when every intermediate fits in cap_bits; nullopt when the
  /// value is irrational or too large.
  std::optional<cpp_rational> evaluate(unsigned cap_bits = kTowerCapBits) const {
    switch (n_->kind) {
      case Kind::number:
        return fits(n_->value, cap_bits) ? std::optional(n_->value) : std::nullopt;
      case Kind::neg: {
        auto a = arg(0).evaluate(cap_bits);
        if (!a) return std::nullopt;
        return cpp_rational(-*a);
      }
      case Kind::add:
      case Kind::mul: {
        auto a = arg(0).evaluate(cap_bits);
        auto b = arg(1).evaluate(cap_bits);
        if (!a || !b) return std::nullopt;
        cpp_rational r = n_->kind == Kind::add ? cpp_rational(*a + *b) : cpp_rational(*a * *b);
        return fits(r, cap_bits) ? std::optional(r) : std::nullopt;
      }
      case Kind::pow: {
        auto b = arg(0).evaluate(cap_bits);
        auto e = arg(1).evaluate(cap_bits);
        if (!b || !e) return std::nullopt;
        return rational_pow(*b, *e, cap_bits);
      }
      case Kind::log: {
        auto a = arg(0).evaluate(cap_bits);
        if (!a || *a <= 0) return std::nullopt;
        return exact_log(n_->base, *a);
      }
      case Kind::tower: {
        auto h = arg(0).evaluate(cap_bits);
        if (!h || denominator(*h) != 1 || *h < 0) return std::nullopt;
        auto x = arg(1).evaluate(cap_bits);
        if (!x) return std::nullopt;
        cpp_int steps = numerator(*h);
        while (steps > 0) {
          x = rational_pow(cpp_rational(n_->base), *x, cap_bits);
          if (!x) return std::nullopt;
          --steps;
        }
        return x;
      }
    }
    return std::nullopt;
  }

  /// log2 of a positive value for comparisons. Towers of height > 0 are not
  /// estimated.
  std::optional<long double> log2_estimate() const {
    switch (n_->kind) {
      case Kind::number:
        if (n_->value <= 0) return std::nullopt;
        return log2_rational(n_->value);
      case Kind::mul: {
        auto a = arg(0).log2_estimate();
        auto b = arg(1).log2_estimate();
        if (!a || !b) return std::nullopt;
        return *a + *b;
      }
      case Kind::pow: {
        auto b = arg(0).log2_estimate();
        auto e = arg(1).real_estimate();
        if (!b || !e) return std::nullopt;
        return *b * *e;
      }
      case Kind::tower: {
        auto h = arg(0).evaluate();
        if (h && *h == 0) return arg(1).log2_estimate();
        return std::nullopt;
      }
      default: {
        auto v = real_estimate();
        if (!v || *v <= 0) return std::nullopt;
        return std::log2(*v);
      }
    }
  }

  std::optional<long double> real_estimate() const {
    if (auto v = evaluate()) return static_cast<long double>(*v);
    switch (n_->kind) {
      case Kind::log: {
        auto a = arg(0).log2_estimate();
        if (!a) return std::nullopt;
        return *a / std::log2(static_cast<long double>(n_->base));
      }
      case Kind::mul: {
        auto a = arg(0).real_estimate();
        auto b = arg(1).real_estimate();
        if (!a || !b) return std::nullopt;
        return *a * *b;
      }
      case Kind::add: {
        auto a = arg(0).real_estimate();
        auto b = arg(1).real_estimate();
        if (!a || !b) return std::nullopt;
        return *a + *b;
      }
      case Kind::neg: {
        auto a = arg(0).real_estimate();
        if (!a) return std::nullopt;
        return -*a;
      }
      default: {
        auto l = log2_estimate();
        if (!l || *l > 16000) return std::nullopt;
        return std::exp2(*l);
      }
    }
  }

 private:
  struct Node {
    Kind kind = Kind::number;
    cpp_rational value;
    std::int64_t base = 0;
    std::vector<Expr> args;
  };

  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static Expr binary(Kind k, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = {std::move(a), std::move(b)};
    return Expr(std::move(n));
  }

  static bool fits(const cpp_rational& v, unsigned cap_bits) {
    const auto bits = [](const cpp_int& x) { return x == 0 ? 0U : static_cast<unsigned>(msb(abs(x))) + 1; };
    return bits(numerator(v)) <= cap_bits && bits(denominator(v)) <= cap_bits;
  }

  static long double log2_rational(const cpp_rational& v) {
    const auto lg = [](const cpp_int& x) {
      const unsigned m = static_cast<unsigned>(msb(x));
      if (m < 60) return std::log2(static_cast<long double>(x));
      const cpp_int top = x >> (m - 59);
      return std::log2(static_cast<long double>(top)) + (m - 59);
    };
    return lg(numerator(v)) - lg(denominator(v));
  }

  static std::optional<cpp_rational> rational_pow(const cpp_rational& b, const cpp_rational& e,
                                                  unsigned cap_bits) {
    if (denominator(e) != 1) {
      if (b == 0 || b == 1) return b;
      return std::nullopt;  // irrational in general
    }
    cpp_int ex = numerator(e);
    const bool negative = ex < 0;
    if (negative) ex = -ex;
    if (b == 0) {
      if (negative) return std::nullopt;
      return cpp_rational(ex == 0 ? 1 : 0);
    }
    const cpp_rational ab = b < 0 ? cpp_rational(-b) : b;
    if (ab != 1) {
      // Refuse before computing: |log2 b| * e must fit in the cap.
      const long double lb = std::fabs(log2_rational(ab));
      if (ex > cpp_int(cap_bits) * 2 + 64) return std::nullopt;
      if (lb * static_cast<long double>(ex) > cap_bits) return std::nullopt;
    }
    cpp_int num = 1, den = 1;
    const unsigned long long n = static_cast<unsigned long long>(ex);
    num = boost::multiprecision::pow(numerator(b), static_cast<unsigned>(n));
    den = boost::multiprecision::pow(denominator(b), static_cast<unsigned>(n));
    cpp_rational r(num, den);
    if (negative) r = 1 / r;
    if (!fits(r, cap_bits)) return std::nullopt;
    return r;
  }

  static std::optional<cpp_rational> exact_log(std::int64_t base, const cpp_rational& a) {
    if (base < 2) return std::nullopt;
    const bool invert = a < 1;
    cpp_rational x = invert ? cpp_rational(1 / a) : a;
    if (denominator(x) != 1) return std::nullopt;
    cpp_int v = numerator(x);
    std::int64_t m = 0;
    while (v > 1) {
      if (v % base != 0) return std::nullopt;
      v /= base;
      ++m;
    }
    return cpp_rational(invert ? -m : m);
  }

  std::string render_prec(int prec) const {
    // prec: 0 top, 1 inside add, 2 inside mul, 3 pow base or exponent.
    const auto wrap = [&](std::string s, int own) { return own < prec ? "(" + s + ")" : s; };
    switch (n_->kind) {
      case Kind::number: {
        std::string s = numerator(n_->value).str();
        if (denominator(n_->value) != 1) return "(" + s + "/" + denominator(n_->value).str() + ")";
        return n_->value < 0 ? "(" + s + ")" : s;
      }
      case Kind::add:
        return wrap(arg(0).render_prec(1) + "+" + arg(1).render_prec(1), 1);
      case Kind::mul:
        return wrap(arg(0).render_prec(2) + "·" + arg(1).render_prec(2), 2);
      case Kind::neg:
        return wrap("-" + arg(0).render_prec(3), 2);
      case Kind::pow:
        return wrap(arg(0).render_prec(3) + "^" + arg(1).render_prec(3), 3);
      case Kind::log:
        return "log_" + std::to_string(n_->base) + "(" + arg(0).render_prec(0) + ")";
      case Kind::tower:
        return "tower_" + std::to_string(n_->base) + "(" + arg(0).render_prec(0) + ", " +
               arg(1).render_prec(0) + ")";
    }
    return "?";
  }

  std::shared_ptr<const Node> n_;
};

// ---------------------------------------------------------------------------
// Rewriting.

namespace detail {

inline Expr height_plus(const Expr& h, std::int64_t k) {
  if (h.kind() == Expr::Kind::number) return Expr::num(h.value() + k);
  if (h.kind() == Expr::Kind::add && h.arg(1).kind() == Expr::Kind::number) {
    const cpp_rational v = h.arg(1).value() + k;
    if (v == 0) return h.arg(0);
    return Expr::add(h.arg(0), Expr::num(v));
  }
  return Expr::add(h, Expr::num(k));
}

}  // namespace detail

/// Canonical height: tower_b(h, b^y) -> tower_b(h+1, y), applied repeatedly.
inline Expr tower_normalize(const Expr& e) {
  using K = Expr::Kind;
  if (e.kind() == K::number) return e;
  if (e.kind() == K::tower) {
    Expr h = tower_normalize(e.arg(0));
    Expr top = tower_normalize(e.arg(1));
    while (top.kind() == K::pow && top.arg(0).kind() == K::number && top.arg(0).value() == e.base()) {
      h = detail::height_plus(h, 1);
      top = top.arg(1);
    }
    return Expr::tower(e.base(), h, top);
  }
  switch (e.kind()) {
    case K::add: return Expr::add(tower_normalize(e.arg(0)), tower_normalize(e.arg(1)));
    case K::mul: return Expr::mul(tower_normalize(e.arg(0)), tower_normalize(e.arg(1)));
    case K::pow: return Expr::pow(tower_normalize(e.arg(0)), tower_normalize(e.arg(1)));
    case K::neg: return Expr::neg(tower_normalize(e.arg(0)));
    case K::log: return Expr::log(e.base(), tower_normalize(e.arg(0)));
    default: return e;
  }
}

/// tower_b(h+1, x) -> tower_b(h, b^x). Requires a numeric or "+k" height.
inline std::optional<Expr> tower_lower(const Expr& e) {
  if (e.kind() != Expr::Kind::tower) return std::nullopt;
  const Expr& h = e.arg(0);
  const bool numeric_positive = h.kind() == Expr::Kind::number && h.value() >= 1;
  const bool plus_k = h.kind() == Expr::Kind::add && h.arg(1).kind() == Expr::Kind::number &&
                      h.arg(1).value() >= 1;
  if (!numeric_positive && !plus_k) return std::nullopt;
  return Expr::tower(e.base(), detail::height_plus(h, -1), Expr::pow(Expr::num(e.base()), e.arg(1)));
}

/// b^{k log_b(x)} -> x^k, applied bottom-up.
inline Expr simplify_power_of_log(const Expr& e) {
  using K = Expr::Kind;
  if (e.kind() == K::number) return e;
  std::vector<Expr> a;
  for (std::size_t i = 0; i < e.arity(); ++i) a.push_back(simplify_power_of_log(e.arg(i)));
  if (e.kind() == K::pow && a[0].kind() == K::number && denominator(a[0].value()) == 1) {
    const Expr& ex = a[1];
    if (ex.kind() == K::mul && ex.arg(1).kind() == K::log && a[0].value() == ex.arg(1).base())
      return Expr::pow(ex.arg(1).arg(0), ex.arg(0));
    if (ex.kind() == K::log && a[0].value() == ex.base()) return ex.arg(0);
  }
  switch (e.kind()) {
    case K::add: return Expr::add(a[0], a[1]);
    case K::mul: return Expr::mul(a[0], a[1]);
    case K::pow: return Expr::pow(a[0], a[1]);
    case K::neg: return Expr::neg(a[0]);
    case K::log: return Expr::log(e.base(), a[0]);
    case K::tower: return Expr::tower(e.base(), a[0], a[1]);
    default: return e;
  }
}

/// For two towers with the same base and structurally equal heights, whether
/// a <= b, decided on the tops (towers are increasing in the top).
inline std::optional<bool> tower_leq(const Expr& a, const Expr& b) {
  if (a.kind() != Expr::Kind::tower || b.kind() != Expr::Kind::tower) return std::nullopt;
  if (a.base() != b.base() || !(a.arg(0) == b.arg(0))) return std::nullopt;
  if (a.arg(1) == b.arg(1)) return true;
  auto x = a.arg(1).evaluate();
  auto y = b.arg(1).evaluate();
  if (x && y) return *x <= *y;
  auto lx = a.arg(1).log2_estimate();
  auto ly = b.arg(1).log2_estimate();
  if (!lx || !ly) return std::nullopt;
  return *lx <= *ly + 1e-12L * (1 + std::fabs(*ly));
}

// ---------------------------------------------------------------------------
// The bound expressions.

struct TowerBound {
  std::string id;
  Expr expr;
  std::optional<cpp_rational> numeric;  // set only when expansion fits the cap
  std::string symbolic;
};

inline const std::vector<std::string>& tower_bound_ids() {
  static const std::vector<std::string> ids = {"1.4", "1.5", "1.6", "1.11",
                                               "lemma3.1-f1", "lemma3.1-f2", "lemma3.1-f3"};
  return ids;
}

/// `param` is the bias parameter of the rank bounds, r for the partition-rank
/// bound from analytic rank, or delta for the density bound;
/// f1 and f2 ignore it.
inline TowerBound tower_bound(std::string_view id, std::int64_t d, const cpp_rational& param, std::int64_t q,
                              unsigned cap_bits = kTowerCapBits) {
  detail::require(d >= 1, "order d must be >= 1");
  detail::require(q >= 2, "field order must be >= 2");
  const std::int64_t base = 8 * q;
  const auto N = [](std::int64_t v) { return Expr::num(v); };
  const auto need_unit_interval = [&](const char* name) {
    detail::require(param > 0 && param <= 1, std::string(name) + " must lie in (0, 1]");
  };
  const Expr h3 = Expr::pow(N(d + 3), N(d + 3));
  std::optional<Expr> e;
  if (id == "1.4" || id == "1.5" || id == "1.6") {
    need_unit_interval(id == "1.4" ? "epsilon" : "c");
    const Expr top = Expr::pow(Expr::num(1 / param), Expr::pow(N(2), N(d)));
    const Expr rank = Expr::add(Expr::mul(Expr::pow(N(2), N(d)), Expr::tower(base, h3, top)), N(1));
    e = id == "1.6" ? Expr::pow(N(q), Expr::neg(rank)) : rank;
  } else if (id == "1.11") {
    detail::require(param >= 0, "r must be >= 0");
    e = Expr::mul(Expr::pow(N(2), N(d - 1)), Expr::tower(base, Expr::add(h3, N(1)), Expr::num(param)));
  } else if (id == "lemma3.1-f1") {
    e = Expr::pow(N(2), Expr::pow(N(3), N(d + 3)));
  } else if (id == "lemma3.1-f2") {
    e = Expr::pow(N(2), Expr::neg(Expr::pow(N(3), N(d + 3))));
  } else if (id == "lemma3.1-f3") {
    need_unit_interval("delta");
    e = Expr::tower(base, Expr::pow(N(d + 4), N(d + 4)), Expr::num(1 / param));
  }
  if (!e) detail::fail_input("unknown bound id '" + std::string(id) + "'");
  TowerBound b{std::string(id), *e, e->evaluate(cap_bits), e->render()};
  return b;
}

}  // namespace trl
