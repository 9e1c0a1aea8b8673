#include <gtest/gtest.h>

#include <variant>

#include "oracle.hpp"
#include "trl/tensor.hpp"

using namespace trl;

namespace {

std::vector<int> ints(const Tensor& t) { return {t.entries().begin(), t.entries().end()}; }
oracle::Gf oracle_for(const FieldSpec& fs) { return {fs.p(), fs.k(), fs.modulus()}; }

}  // namespace

TEST(Tensor, EvalMatchesNaiveSum) {
  Rng rng(21);
  for (int q : {2, 3, 4}) {
    const auto fs = FieldSpec::of_order(q);
    const auto g = oracle_for(fs);
    for (int trial = 0; trial < 20; ++trial) {
      const Dims dims{1 + rng.below(3), 1 + rng.below(3), 1 + rng.below(3)};
      const Tensor t = random_tensor(fs, dims, rng);
      std::vector<std::vector<FieldElem>> vs;
      std::vector<std::vector<int>> ivs;
      for (auto n : dims) {
        vs.emplace_back(n);
        for (auto& x : vs.back()) x = static_cast<FieldElem>(rng.below(q));
        ivs.emplace_back(vs.back().begin(), vs.back().end());
      }
      const std::vector<int> idims(dims.begin(), dims.end());
      EXPECT_EQ(tensor_eval(t, vs), oracle::eval_multilinear(g, idims, ints(t), ivs));
    }
  }
}

TEST(Tensor, ContractLeadingModes) {
  const auto fs = FieldSpec::make(3);
  Rng rng(1);
  const Tensor r = random_tensor(fs, {2, 3, 2}, rng);
  const Tensor s = random_tensor(fs, {2}, rng);
  const auto out = std::get<Tensor>(contract(r, s));
  ASSERT_EQ(out.dims(), (Dims{3, 2}));
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 2; ++k) {
      FieldElem acc = 0;
      for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t idx[] = {i, j, k};
        acc = fs.add(acc, fs.mul(r.at(idx), s[i]));
      }
      const std::size_t o[] = {j, k};
      EXPECT_EQ(out.at(o), acc);
    }
  const Tensor full = random_tensor(fs, {2, 3, 2}, rng);
  EXPECT_TRUE(std::holds_alternative<FieldElem>(contract(r, full)));
  EXPECT_THROW(contract(s, r), InvalidInput);
}

TEST(Tensor, MatricizeRoundTripsEverySplit) {
  const auto fs = FieldSpec::make(5);
  Rng rng(2);
  const Tensor t = random_tensor(fs, {2, 3, 2, 2}, rng);
  for (const auto& s : all_splits(4)) EXPECT_EQ(unmatricize(matricize(t, s), t.dims(), s), t);
}

TEST(Tensor, RankOneHasMatrixRankOne) {
  const auto fs = FieldSpec::make(3);
  Rng rng(4);
  for (const auto& s : canonical_splits(3)) {
    const Dims dims{2, 3, 2};
    Tensor a = random_tensor(fs, sub_dims(dims, s.mask()), rng);
    Tensor b = random_tensor(fs, sub_dims(dims, s.complement_mask()), rng);
    if (a.is_zero() || b.is_zero()) continue;
    const Tensor t = rank_one(s, a, b);
    EXPECT_EQ(rank(matricize(t, s)), 1U);
  }
}

TEST(Tensor, CanonicalSplitsAreProperAndDistinct) {
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto splits = canonical_splits(d);
    EXPECT_EQ(splits.size(), (std::size_t{1} << (d - 1)) - 1);
    for (const auto& s : splits) {
      EXPECT_NE(s.mask(), 0U);
      EXPECT_NE(s.mask(), full_mask(d));
    }
  }
}

TEST(Tensor, PermuteModes) {
  const auto fs = FieldSpec::make(2);
  Rng rng(6);
  const Tensor t = random_tensor(fs, {2, 3, 4}, rng);
  const std::vector<std::size_t> perm{2, 0, 1};
  const Tensor u = permute_modes(t, perm);
  ASSERT_EQ(u.dims(), (Dims{4, 2, 3}));
  for (std::uint64_t f = 0; f < u.size(); ++f) {
    const auto idx = u.multi_index(f);
    const std::size_t src[] = {idx[1], idx[2], idx[0]};
    EXPECT_EQ(u[f], t.at(src));
  }
}

TEST(Tensor, RejectsMalformed) {
  const auto fs = FieldSpec::make(2);
  EXPECT_THROW(Tensor(fs, {2, 2}, {0, 1, 0}), InvalidInput);
  EXPECT_THROW(Tensor(fs, {2, 2}, {0, 1, 0, 2}), InvalidInput);
  EXPECT_THROW(Tensor(fs, {}, {}), InvalidInput);
  EXPECT_THROW(Tensor::zeros(fs, {2048, 2048}), GuardExceeded);
}
