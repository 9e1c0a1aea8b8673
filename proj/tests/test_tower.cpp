#include <gtest/gtest.h>

#include "trl/tower.hpp"

using namespace trl;

TEST(Tower, BaseCases) {
  EXPECT_EQ(*Expr::tower(16, Expr::num(0), Expr::num(7)).evaluate(), cpp_rational(7));
  EXPECT_EQ(*Expr::tower(16, Expr::num(1), Expr::num(2)).evaluate(), cpp_rational(256));
  EXPECT_EQ(*Expr::tower(2, Expr::num(2), Expr::num(2)).evaluate(), cpp_rational(16));
  EXPECT_EQ(*Expr::tower(2, Expr::num(3), Expr::num(2)).evaluate(), cpp_rational(65536));
}

TEST(Tower, HeightShiftIdentity) {
  // tower_b(h + 1, x) = tower_b(h, b^x)
  for (std::int64_t b : {2, 3, 16}) {
    for (std::int64_t x : {0, 1, 2}) {
      const auto lhs = Expr::tower(b, Expr::num(2), Expr::num(x)).evaluate();
      const auto rhs = Expr::tower(b, Expr::num(1), Expr::pow(Expr::num(b), Expr::num(x))).evaluate();
      ASSERT_TRUE(lhs && rhs);
      EXPECT_EQ(*lhs, *rhs);
    }
  }
}

TEST(Tower, RefusesHugeExpansion) {
  const auto e = Expr::tower(16, Expr::num(3), Expr::num(1));
  EXPECT_FALSE(e.evaluate().has_value());
  const auto big = Expr::pow(Expr::num(2), Expr::num(5000));
  EXPECT_FALSE(big.evaluate().has_value());
  EXPECT_TRUE(Expr::pow(Expr::num(2), Expr::num(4000)).evaluate().has_value());
}

TEST(Tower, Render) {
  const auto b = tower_bound("1.11", 3, 1, 2);
  EXPECT_EQ(b.symbolic, "2^2·tower_16(6^6+1, 1)");
  EXPECT_FALSE(b.numeric.has_value());
}

TEST(Tower, LoweringAndNormalizationAreInverse) {
  // tower_{8q}(H + 1, r) = tower_{8q}(H, (8q)^r), and normalizing folds it back.
  const auto b = tower_bound("1.11", 2, 1, 2);
  const Expr t = b.expr.arg(1);
  const auto lowered = tower_lower(t);
  ASSERT_TRUE(lowered.has_value());
  EXPECT_EQ(lowered->render(), "tower_16(5^5, 16^1)");
  EXPECT_EQ(tower_normalize(*lowered), t);
  const auto small = Expr::tower(16, Expr::num(1), Expr::num(1));
  EXPECT_EQ(*tower_lower(small)->evaluate(), *small.evaluate());
}

TEST(Tower, PowerOfLogSimplifies) {
  // q^{2^d log_q(1/c)} = (1/c)^{2^d}
  const Expr e = Expr::pow(Expr::num(3), Expr::mul(Expr::pow(Expr::num(2), Expr::num(2)),
                                                   Expr::log(3, Expr::num(cpp_rational(4)))));
  const Expr s = simplify_power_of_log(e);
  EXPECT_EQ(*s.evaluate(), cpp_rational(256));
  EXPECT_EQ(s.render(), "4^2^2");
}

TEST(Tower, LeqComparesTops) {
  const auto a = Expr::tower(16, Expr::num(5), Expr::num(2));
  const auto b = Expr::tower(16, Expr::num(5), Expr::num(3));
  EXPECT_EQ(tower_leq(a, b), std::optional<bool>(true));
  EXPECT_EQ(tower_leq(b, a), std::optional<bool>(false));
}

TEST(Tower, KnownIds) {
  for (const auto& id : tower_bound_ids()) {
    const auto b = tower_bound(id, 2, cpp_rational(1, 2), 2);
    EXPECT_FALSE(b.symbolic.empty()) << id;
  }
  EXPECT_EQ(*tower_bound("lemma3.1-f1", 1, 1, 2).numeric, cpp_rational(cpp_int(1) << 81));
  EXPECT_THROW(tower_bound("1.11", 0, 1, 2), InvalidInput);
  EXPECT_THROW(tower_bound("9.9", 2, 1, 2), InvalidInput);
}
