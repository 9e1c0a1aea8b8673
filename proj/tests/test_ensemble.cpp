#include <gtest/gtest.h>

#include "trl/ensemble.hpp"

using namespace trl;

TEST(Ensemble, RandomTensorsRepeatable) {
  const EnsembleParams p;
  const auto a = ensemble("random-tensor", 100, 5, p, Exec{1});
  const auto b = ensemble("random-tensor", 100, 5, p, Exec{3});
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.rows.size(), 100U);
  EXPECT_TRUE(a.violations.empty());
  EXPECT_NE(a.rows, ensemble("random-tensor", 100, 6, p).rows);
}

TEST(Ensemble, PrefixStable) {
  const EnsembleParams p;
  const auto a = ensemble("random-tensor", 10, 5, p);
  const auto b = ensemble("random-tensor", 20, 5, p);
  EXPECT_TRUE(std::equal(a.rows.begin(), a.rows.end(), b.rows.begin()));
}

TEST(Ensemble, DegenerateWithinBound) {
  EnsembleParams p;
  p.dims = {3, 3, 3};
  p.k = 1;
  const auto t = ensemble("degenerate", 20, 9, p);
  EXPECT_TRUE(t.violations.empty());
  const auto col = std::find(t.columns.begin(), t.columns.end(), "summands") - t.columns.begin();
  for (const auto& row : t.rows) EXPECT_LE(std::stoi(row[col]), 4);
}

TEST(Ensemble, PolynomialsMonotone) {
  EnsembleParams p;
  p.q = 3;
  p.nvars = 2;
  p.degree = 2;
  const auto t = ensemble("random-poly", 20, 3, p);
  EXPECT_TRUE(t.violations.empty());
  const auto col = std::find(t.columns.begin(), t.columns.end(), "monotone") - t.columns.begin();
  for (const auto& row : t.rows) EXPECT_EQ(row[col], "yes");
}

TEST(Ensemble, ProductMultisets) {
  EnsembleParams p;
  p.dims = {3, 3};
  const auto t = ensemble("product-multiset", 5, 4, p);
  EXPECT_TRUE(t.violations.empty());
  EXPECT_EQ(t.rows.size(), 5U);
}

TEST(Ensemble, UnknownKind) { EXPECT_THROW(ensemble("nope", 1, 1, EnsembleParams{}), InvalidInput); }
