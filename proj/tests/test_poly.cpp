#include <gtest/gtest.h>

#include "oracle.hpp"
#include "trl/gowers.hpp"
#include "trl/rank.hpp"

using namespace trl;

namespace {

oracle::Gf oracle_for(const FieldSpec& fs) { return {fs.p(), fs.k(), fs.modulus()}; }

oracle::Poly to_oracle(const Polynomial& p) {
  oracle::Poly out;
  for (const auto& [e, c] : p.terms()) out[e] = c;
  return out;
}

Polynomial monomial(const FieldSpec& fs, std::size_t n, Exponents e, FieldElem c = 1) {
  Polynomial p(fs, n);
  p.add_term(e, c);
  return p;
}

const FieldSpec f3 = FieldSpec::make(3);
const Polynomial x1x2 = monomial(f3, 2, {1, 1});

}  // namespace

TEST(Polynomial, EvalExamples) {
  EXPECT_EQ(x1x2.eval(std::vector<FieldElem>{2, 2}), 1);
  EXPECT_EQ(monomial(f3, 1, {2}).eval(std::vector<FieldElem>{2}), 1);
  EXPECT_EQ(Polynomial(f3, 3).eval(std::vector<FieldElem>{1, 2, 0}), 0);
}

TEST(Polynomial, TableMatchesOracle) {
  Rng rng(40);
  for (int q : {2, 3, 4, 5, 9}) {
    const auto fs = FieldSpec::of_order(q);
    const auto g = oracle_for(fs);
    for (int trial = 0; trial < 5; ++trial) {
      const auto p = random_polynomial(fs, 2, 1 + rng.below(4), rng);
      const auto table = p.table();
      const VecCodec codec(q, 2);
      for (std::uint64_t x = 0; x < table.size(); ++x) {
        const auto v = codec.decode(x);
        ASSERT_EQ(table[x], oracle::eval_poly(g, to_oracle(p), {v[0], v[1]}));
      }
    }
  }
}

TEST(Polynomial, DerivativeExamples) {
  const std::vector<FieldElem> e1{1, 0};
  EXPECT_EQ(derivative(x1x2, e1), Polynomial::variable(f3, 2, 1));
  EXPECT_TRUE(derivative(x1x2, std::vector<FieldElem>{0, 0}).is_zero());
  Polynomial lin = Polynomial::variable(f3, 2, 0) + Polynomial::variable(f3, 2, 1).scaled(2);
  EXPECT_EQ(derivative(lin, std::vector<FieldElem>{1, 1}), Polynomial::constant(f3, 2, 0));
  EXPECT_EQ(derivative(lin, std::vector<FieldElem>{1, 0}), Polynomial::constant(f3, 2, 1));
}

TEST(Polynomial, ShiftMatchesPointwise) {
  Rng rng(41);
  for (int q : {3, 4, 5}) {
    const auto fs = FieldSpec::of_order(q);
    const auto p = random_polynomial(fs, 2, 3, rng);
    std::vector<FieldElem> y{static_cast<FieldElem>(rng.below(q)), static_cast<FieldElem>(rng.below(q))};
    const auto s = p.shifted(y);
    const VecCodec codec(q, 2);
    for (std::uint64_t x = 0; x < codec.size(); ++x) {
      auto v = codec.decode(x);
      auto w = v;
      for (int i = 0; i < 2; ++i) w[i] = fs.add(v[i], y[i]);
      EXPECT_EQ(s.eval(v), p.eval(w));
    }
  }
}

TEST(Polynomial, Render) {
  Polynomial p = monomial(f3, 2, {2, 0}) + monomial(f3, 2, {1, 1}, 2);
  EXPECT_EQ(p.render(), "x1^2 + 2*x1x2");
}

TEST(PolyBias, Examples) {
  EXPECT_EQ(*poly_bias(Polynomial(f3, 2), 1).exact, cpp_rational(1));
  EXPECT_EQ(*poly_bias(Polynomial::variable(f3, 2, 0), 2).exact, cpp_rational(0));
  const auto sq = poly_bias(monomial(f3, 1, {2}), 1);
  EXPECT_FALSE(sq.exact.has_value());
  EXPECT_NEAR(sq.value.re, 0.0, 1e-12);
  EXPECT_NEAR(sq.value.im, std::sqrt(3.0) / 3, 1e-12);
  EXPECT_NEAR(sq.value.magnitude(), 1 / std::sqrt(3.0), 1e-12);
}

TEST(DerivativeTensor, Examples) {
  const Tensor t = derivative_tensor(x1x2, 2);
  EXPECT_EQ(t, Tensor(f3, {2, 2}, {0, 1, 1, 0}));
  const auto f5 = FieldSpec::make(5);
  const Tensor u = derivative_tensor(monomial(f5, 3, {1, 1, 1}), 3);
  for (std::uint64_t f = 0; f < u.size(); ++f) {
    auto idx = u.multi_index(f);
    std::sort(idx.begin(), idx.end());
    const bool perm = idx == std::vector<std::size_t>{0, 1, 2};
    EXPECT_EQ(u[f], perm ? 1 : 0);
  }
  EXPECT_TRUE(derivative_tensor(Polynomial::variable(f3, 2, 0), 2).is_zero());
  EXPECT_THROW(derivative_tensor(monomial(f5, 3, {1, 1, 1}), 2), InvalidInput);
}

TEST(DerivativeTensor, MatchesIteratedDerivative) {
  Rng rng(42);
  for (int q : {3, 5, 7}) {
    const auto fs = FieldSpec::of_order(q);
    for (unsigned d : {2U, 3U}) {
      if (static_cast<int>(d) >= q) continue;
      const auto p = random_polynomial(fs, 3, d, rng);
      EXPECT_TRUE(derivative_tensor_check(p, derivative_tensor(p, d), rng, 50));
    }
  }
}

TEST(Taylor, Examples) {
  const auto s = taylor_split(x1x2, 2);
  EXPECT_TRUE(s.w.is_zero());
  EXPECT_EQ(s.top, x1x2);
  EXPECT_TRUE(taylor_verify(x1x2, s));
  Polynomial p = x1x2 + monomial(f3, 2, {0, 1}, 2) + Polynomial::constant(f3, 2, 1);
  const auto s2 = taylor_split(p, 2);
  EXPECT_EQ(s2.w, monomial(f3, 2, {0, 1}, 2) + Polynomial::constant(f3, 2, 1));
  const auto f2 = FieldSpec::make(2);
  EXPECT_THROW(taylor_split(monomial(f2, 2, {1, 1}), 2), CharacteristicError);
}

TEST(Gowers, ZeroPolynomialAndU1) {
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_DOUBLE_EQ(gowers_norm(Polynomial(f3, 2), k, 1).value, 1.0);
  const auto p = monomial(f3, 1, {2});
  EXPECT_NEAR(gowers_norm(p, 1, 1).value, poly_bias(p, 1).value.magnitude(), 1e-12);
}

TEST(Gowers, BilinearU2) {
  const auto g = gowers_norm(x1x2, 2, 1);
  EXPECT_EQ(*g.power, cpp_rational(1, 9));
  EXPECT_EQ(bias_exact(derivative_tensor(x1x2, 2)).value(), cpp_rational(1, 9));
}

TEST(Gowers, MatchesCubeAverage) {
  Rng rng(43);
  for (int q : {2, 3, 4, 5}) {
    const auto fs = FieldSpec::of_order(q);
    const auto g = oracle_for(fs);
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto p = random_polynomial(fs, 2, 2, rng);
      for (int c = 1; c < q; c += 2) {
        const auto z = oracle::brute_gowers_power(g, to_oracle(p), 2, static_cast<int>(k), c);
        const auto norm = gowers_norm(p, k, static_cast<FieldElem>(c));
        EXPECT_NEAR(std::pow(norm.value, 1 << k), static_cast<double>(z.real()), 1e-9);
        EXPECT_NEAR(static_cast<double>(z.imag()), 0.0, 1e-9);
      }
    }
  }
}

TEST(Gowers, TopOrderHistogramIdentity) {
  Rng rng(44);
  for (int q : {3, 5}) {
    const auto fs = FieldSpec::of_order(q);
    for (unsigned d : {2U, 3U}) {
      if (static_cast<int>(d) >= q) continue;
      const auto p = random_polynomial(fs, 2, d, rng);
      const auto h = gowers_histogram(p, d);
      const auto t = bias_charsum_crosscheck(derivative_tensor(p, d));
      for (int a = 0; a < q; ++a) EXPECT_EQ(h.counts[a], t.counts[a] * q * q);
    }
  }
}

TEST(Gowers, ParallelMatchesSerial) {
  Rng rng(45);
  const auto p = random_polynomial(FieldSpec::make(5), 2, 3, rng);
  EXPECT_EQ(gowers_histogram(p, 3, Exec{1}), gowers_histogram(p, 3, Exec{3}));
}

TEST(Correlation, BilinearOverF3) {
  // Independent maximum of |bias(P - Q)| over the 27 affine Q.
  const auto g = oracle_for(f3);
  long double best = 0;
  for (int c0 = 0; c0 < 3; ++c0)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        oracle::Complex s = 0;
        for (int x = 0; x < 3; ++x)
          for (int y = 0; y < 3; ++y) s += g.chi(g.sub(g.mul(x, y), g.add(c0, g.add(g.mul(a, x), g.mul(b, y)))), 1);
        best = std::max(best, std::abs(s) / 9);
      }
  EXPECT_NEAR(static_cast<double>(best), 1.0 / 3, 1e-12);

  const auto r = correlation_search(x1x2, 1, 1);
  EXPECT_EQ(r.candidates, 27U);
  EXPECT_NEAR(r.value, 1.0 / 3, 1e-12);
  EXPECT_TRUE(r.best.is_zero());
  EXPECT_TRUE(r.prime_field);
}

TEST(Correlation, LowDegreeIsPerfect) {
  const auto p = Polynomial::variable(f3, 2, 0) + Polynomial::constant(f3, 2, 2);
  const auto r = correlation_search(p, 1, 1);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(correlation_search(Polynomial(f3, 2), 0, 1).value, 1.0, 1e-12);
}

TEST(Correlation, WorkerIndependent) {
  Rng rng(46);
  const auto p = random_polynomial(FieldSpec::make(5), 2, 3, rng);
  const auto a = correlation_search(p, 1, 1, Exec{1});
  const auto b = correlation_search(p, 1, 1, Exec{4});
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.value, b.value);
}

TEST(RankCheck, Examples) {
  const auto self = rank_certificate_check(x1x2, {x1x2});
  ASSERT_TRUE(self.certificate.has_value());
  for (const auto& [k, v] : self.certificate->table) EXPECT_EQ(k[0], v);

  const auto x1 = Polynomial::variable(f3, 2, 0), x2 = Polynomial::variable(f3, 2, 1);
  const auto prod = rank_certificate_check(x1x2, {x1, x2});
  ASSERT_TRUE(prod.certificate.has_value());
  EXPECT_TRUE(prod.degrees_ok);
  EXPECT_EQ(prod.certificate->table.size(), 9U);
  for (const auto& [k, v] : prod.certificate->table) EXPECT_EQ(v, f3.mul(k[0], k[1]));

  const auto bad = rank_certificate_check(x1, {x2});
  EXPECT_FALSE(bad.certificate.has_value());
  ASSERT_TRUE(bad.witness.has_value());
  const auto& [u, v] = *bad.witness;
  EXPECT_EQ(x2.eval(u), x2.eval(v));
  EXPECT_NE(x1.eval(u), x1.eval(v));
}
