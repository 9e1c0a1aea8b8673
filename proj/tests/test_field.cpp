#include <gtest/gtest.h>

#include "oracle.hpp"
#include "trl/field.hpp"
#include "trl/guard.hpp"

using namespace trl;

namespace {

oracle::Gf oracle_for(const FieldSpec& fs) {
  oracle::Gf g;
  g.p = fs.p();
  g.k = fs.k();
  g.modulus = fs.modulus();
  return g;
}

}  // namespace

TEST(Field, F4Examples) {
  const auto f4 = FieldSpec::make(2, 2);
  EXPECT_EQ(f4.add(2, 3), 1);
  EXPECT_EQ(f4.mul(2, 2), 3);
  EXPECT_EQ(f4.trace(2), 1);
}

TEST(Field, F5Inverse) {
  const auto f5 = FieldSpec::make(5);
  EXPECT_EQ(f5.inv(2), 3);
  EXPECT_THROW(f5.inv(0), InvalidInput);
}

TEST(Field, TablesMatchSchoolbookArithmetic) {
  for (int q : {2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64}) {
    const auto fs = FieldSpec::of_order(q);
    const auto g = oracle_for(fs);
    for (int a = 0; a < q; ++a) {
      const auto ea = static_cast<FieldElem>(a);
      EXPECT_EQ(fs.neg(ea), g.neg(a));
      EXPECT_EQ(fs.trace(ea), g.trace(a)) << "q=" << q << " a=" << a;
      if (a != 0) {
        EXPECT_EQ(fs.inv(ea), g.inv(a));
      }
      for (int b = 0; b < q; ++b) {
        const auto eb = static_cast<FieldElem>(b);
        ASSERT_EQ(fs.add(ea, eb), g.add(a, b));
        ASSERT_EQ(fs.mul(ea, eb), g.mul(a, b));
      }
    }
  }
}

TEST(Field, TraceIsSurjectiveAndBalanced) {
  for (int q : {4, 8, 9, 27}) {
    const auto fs = FieldSpec::of_order(q);
    std::vector<int> count(fs.p(), 0);
    for (int a = 0; a < q; ++a) ++count[fs.trace(static_cast<FieldElem>(a))];
    for (int c : count) EXPECT_EQ(c, q / fs.p());
  }
}

TEST(Field, RejectsBadSpecs) {
  EXPECT_THROW(FieldSpec::make(4), InvalidInput);
  EXPECT_THROW(FieldSpec::make(2, 7), InvalidInput);
  EXPECT_THROW(FieldSpec::make(2, 2, std::vector<int>{1, 0, 1}), InvalidInput);  // x^2 + 1 = (x+1)^2
  EXPECT_THROW(FieldSpec::make(3).check(3), InvalidInput);
}

TEST(Field, VecCodecOrder) {
  const VecCodec c(3, 3);
  EXPECT_EQ(c.size(), 27U);
  const std::vector<FieldElem> v{1, 0, 2};
  EXPECT_EQ(c.encode(v), 11U);
  EXPECT_EQ(c.decode(11), v);
  std::vector<FieldElem> w(3, 0);
  std::uint64_t n = 1;
  while (next_vector(w, 3)) {
    EXPECT_EQ(c.encode(w), n);
    ++n;
  }
  EXPECT_EQ(n, 27U);
}

TEST(Field, RationalCharSumDetectsIrrational) {
  const auto f3 = FieldSpec::make(3);
  // Values of x^2 over F_3: 0, 1, 1.
  const auto h = ValueHistogram::from_counts(std::vector<std::uint64_t>{1, 2, 0});
  EXPECT_FALSE(rational_char_sum(h, 1, f3).has_value());
  const auto u = ValueHistogram::from_counts(std::vector<std::uint64_t>{3, 1, 1});
  EXPECT_EQ(*rational_char_sum(u, 1, f3), cpp_rational(2, 5));
  const auto s = histogram_char_sum(h, 1, f3);
  const auto want = (oracle::Complex(1) + 2.0L * std::polar(1.0L, 2 * std::numbers::pi_v<long double> / 3)) / 3.0L;
  EXPECT_NEAR(s.re, static_cast<double>(want.real()), 1e-12);
  EXPECT_NEAR(s.im, static_cast<double>(want.imag()), 1e-12);
}

TEST(Guard, OverrideOnlyRaises) {
  ::setenv("TRL_GUARD_OVERRIDE", "4", 1);
  EXPECT_EQ(guard::effective_bits(guard::kEnumerationBits), guard::kEnumerationBits);
  ::setenv("TRL_GUARD_OVERRIDE", "30", 1);
  EXPECT_EQ(guard::effective_bits(guard::kEnumerationBits), 30U);
  ::unsetenv("TRL_GUARD_OVERRIDE");
  EXPECT_THROW(guard::check_pow(2, 25, guard::kEnumerationBits, "x"), GuardExceeded);
  EXPECT_NO_THROW(guard::check_pow(2, 24, guard::kEnumerationBits, "x"));
}
